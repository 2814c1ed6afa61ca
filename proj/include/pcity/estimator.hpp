#pragma once

// Truncated estimator of the upper half-plane flow volume 2F:
//
//   (int Gamma_-)(int Gamma_+) + sum_{n<=N} |C+_n| |Delta+_n| + sum_{n<=N} |C-_n| |Delta-_n|
//
// with every ingredient bracketed, so the result carries a deterministic
// interval next to the stochastic L1 truncation bound.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pcity/curve.hpp"
#include "pcity/regions.hpp"
#include "pcity/rng.hpp"

namespace pcity {

struct FlowEstimate {
  std::size_t N = 0;
  double value = 0.0;  // midpoint of [lower, upper]
  double lower = 0.0;
  double upper = 0.0;
  double bracket_width = 0.0;
  double l1_bound = 0.0;
  double product_term = 0.0;  // midpoint of the product-of-integrals bracket
  AreaBracket product_bracket;
  std::vector<double> plus_terms;   // midpoints of |C+_n| |Delta+_n|, n = 0..N
  std::vector<double> minus_terms;  // midpoints of |C-_n| |Delta-_n|
  double sum_plus = 0.0;
  double sum_minus = 0.0;
};

/// L1 bound on the truncation error at depth N: (20/7) 3^-N + (20/27) 6^-N.
inline double l1_error_bound(std::size_t N) {
  const double n = static_cast<double>(N);
  return 20.0 / 7.0 * std::pow(3.0, -n) + 20.0 / 27.0 * std::pow(6.0, -n);
}

namespace detail {

struct SideTerms {
  std::vector<AreaBracket> terms;
};

// Terms |C_n| |Delta_n| for the tangent lines of `own` against `opposite`.
// C_n is bracketed to within 2^{-n-2} eps / |Delta_n|, so term n is within 2^{-n-2} eps.
template <VariateSource Src>
SideTerms side_terms(const SeminalCurve& own, SeminalCurve& opposite, Src& opposite_stream, std::size_t N,
                     double eps, std::size_t max_steps) {
  SideTerms out;
  out.terms.reserve(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    const CurveVertex& v = own.vertex(n);
    const double delta = delta_area(v, own.vertex(n + 1));
    const double tol = std::ldexp(eps, -static_cast<int>(n) - 2) / delta;
    const AreaBracket c = c_region_area(TangentLine::of(v), opposite, opposite_stream, tol, max_steps);
    out.terms.push_back({c.lower * delta, c.upper * delta});
  }
  return out;
}

}  // namespace detail

/// Estimate of 2F from the left curve (mirrored) and the right curve. Both
/// curves are extended as needed from their own streams. The deterministic
/// bracket width is at most 3 eps / 2: eps / 2 from the product of integrals
/// and 2^{-n-2} eps from each correction term on either side.
template <VariateSource Src>
FlowEstimate estimate_half_plane(SeminalCurve& gamma_minus, Src& minus_stream, SeminalCurve& gamma_plus,
                                 Src& plus_stream, std::size_t N, double eps,
                                 std::size_t max_steps = kDefaultMaxSteps) {
  if (!(eps > 0.0)) {
    throw InvalidParameter("estimate_half_plane: eps must be positive");
  }
  if (gamma_minus.size() < N + 2) extend_until(gamma_minus, minus_stream, stop_at_depth(N + 1), max_steps);
  if (gamma_plus.size() < N + 2) extend_until(gamma_plus, plus_stream, stop_at_depth(N + 1), max_steps);

  const detail::SideTerms plus = detail::side_terms(gamma_plus, gamma_minus, minus_stream, N, eps, max_steps);
  const detail::SideTerms minus = detail::side_terms(gamma_minus, gamma_plus, plus_stream, N, eps, max_steps);

  // Product bracket width is w+ up- + lo+ w- <= w+ Gamma_-(1) + w- Gamma_+(1),
  // so each tail mass below eps / (4 Gamma_opposite(1)) keeps it under eps / 2.
  const double top_minus = gamma_minus.vertex(0).value();
  const double top_plus = gamma_plus.vertex(0).value();
  if (gamma_minus.tail_mass() > eps / (4.0 * top_plus)) {
    extend_until(gamma_minus, minus_stream, stop_tail_mass(eps / (4.0 * top_plus)), max_steps);
  }
  if (gamma_plus.tail_mass() > eps / (4.0 * top_minus)) {
    extend_until(gamma_plus, plus_stream, stop_tail_mass(eps / (4.0 * top_minus)), max_steps);
  }
  const AreaBracket im = gamma_minus.integral_bracket();
  const AreaBracket ip = gamma_plus.integral_bracket();

  FlowEstimate est;
  est.N = N;
  est.product_bracket = {im.lower * ip.lower, im.upper * ip.upper};
  est.product_term = est.product_bracket.midpoint();
  est.lower = est.product_bracket.lower;
  est.upper = est.product_bracket.upper;
  for (const AreaBracket& t : plus.terms) {
    est.plus_terms.push_back(t.midpoint());
    est.sum_plus += t.midpoint();
    est.lower += t.lower;
    est.upper += t.upper;
  }
  for (const AreaBracket& t : minus.terms) {
    est.minus_terms.push_back(t.midpoint());
    est.sum_minus += t.midpoint();
    est.lower += t.lower;
    est.upper += t.upper;
  }
  est.value = 0.5 * (est.lower + est.upper);
  est.bracket_width = est.upper - est.lower;
  est.l1_bound = l1_error_bound(N);
  return est;
}

inline FlowEstimate estimate_half_plane(CurveSource& gamma_minus, CurveSource& gamma_plus, std::size_t N,
                                        double eps, std::size_t max_steps = kDefaultMaxSteps) {
  return estimate_half_plane(gamma_minus.curve, gamma_minus.stream, gamma_plus.curve, gamma_plus.stream, N, eps,
                             max_steps);
}

// Fork tags: which random variable a derived stream drives.
enum StreamTag : std::uint64_t {
  kTagUpperHalf = 1,
  kTagLowerHalf = 2,
  kTagMinusCurve = 3,
  kTagPlusCurve = 4,
};

/// Draws the independent pair of seminal curves for one half-plane.
inline std::pair<CurveSource, CurveSource> draw_curve_pair(const RngStream& half_plane_stream) {
  return {CurveSource::draw(half_plane_stream.fork(kTagMinusCurve), Orientation::left),
          CurveSource::draw(half_plane_stream.fork(kTagPlusCurve), Orientation::right)};
}

inline FlowEstimate sample_half_plane(const RngStream& half_plane_stream, std::size_t N, double eps) {
  auto [minus, plus] = draw_curve_pair(half_plane_stream);
  return estimate_half_plane(minus, plus, N, eps);
}

struct TotalFlowParts {
  FlowEstimate total;
  FlowEstimate upper;
  FlowEstimate lower;
};

/// Average of two half-plane estimates; every field is averaged.
inline FlowEstimate average_estimates(const FlowEstimate& a, const FlowEstimate& b) {
  FlowEstimate t;
  t.N = a.N;
  t.value = 0.5 * (a.value + b.value);
  t.lower = 0.5 * (a.lower + b.lower);
  t.upper = 0.5 * (a.upper + b.upper);
  t.bracket_width = 0.5 * (a.bracket_width + b.bracket_width);
  t.l1_bound = 0.5 * (a.l1_bound + b.l1_bound);
  t.product_term = 0.5 * (a.product_term + b.product_term);
  t.product_bracket = {0.5 * (a.product_bracket.lower + b.product_bracket.lower),
                       0.5 * (a.product_bracket.upper + b.product_bracket.upper)};
  t.sum_plus = 0.5 * (a.sum_plus + b.sum_plus);
  t.sum_minus = 0.5 * (a.sum_minus + b.sum_minus);
  for (std::size_t i = 0; i < a.plus_terms.size() && i < b.plus_terms.size(); ++i) {
    t.plus_terms.push_back(0.5 * (a.plus_terms[i] + b.plus_terms[i]));
  }
  for (std::size_t i = 0; i < a.minus_terms.size() && i < b.minus_terms.size(); ++i) {
    t.minus_terms.push_back(0.5 * (a.minus_terms[i] + b.minus_terms[i]));
  }
  return t;
}

/// Total central flow from four independent curves (an upper and a lower pair).
inline TotalFlowParts sample_total_flow_parts(const RngStream& replicate_stream, std::size_t N, double eps) {
  TotalFlowParts parts;
  parts.upper = sample_half_plane(replicate_stream.fork(kTagUpperHalf), N, eps);
  parts.lower = sample_half_plane(replicate_stream.fork(kTagLowerHalf), N, eps);
  parts.total = average_estimates(parts.upper, parts.lower);
  return parts;
}

inline FlowEstimate sample_total_flow(const RngStream& replicate_stream, std::size_t N, double eps) {
  return sample_total_flow_parts(replicate_stream, N, eps).total;
}

/// Streaming count / mean / M2 (Welford) with an associative merge.
class RunningStats {
 public:
  void push(double x) {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
  }

  void merge(const RunningStats& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count_ + o.count_);
    const double d = o.mean_ - mean_;
    m2_ += o.m2_ + d * d * static_cast<double>(count_) * static_cast<double>(o.count_) / n;
    mean_ += d * static_cast<double>(o.count_) / n;
    count_ += o.count_;
  }

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double standard_error() const {
    return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace pcity
