#pragma once

// Statistical checks of the closed-form identities satisfied by the curve
// dynamics and the flow estimator. Every check returns a TestReport that is
// reproducible from (seed, parameters).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "pcity/curve.hpp"
#include "pcity/errors.hpp"
#include "pcity/estimator.hpp"
#include "pcity/oracle.hpp"
#include "pcity/parallel.hpp"
#include "pcity/rng.hpp"

namespace pcity {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n_samples = 0;
  bool passed = false;
  std::uint64_t seed = 0;
};

/// Stream for replicate i of an experiment rooted at `base`.
inline RngStream replicate_stream(const RngStream& base, std::size_t i) {
  return RngStream(base.seed(), i, base.tag());
}

/// Negative-control hook: hands out U^2 in place of U.
template <VariateSource Src>
class SquaredUniformSource {
 public:
  explicit SquaredUniformSource(Src& inner) : inner_(inner) {}
  double uniform01() {
    const double u = inner_.uniform01();
    return u * u;
  }
  double exponential1() { return inner_.exponential1(); }

 private:
  Src& inner_;
};

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

/// sup |F_n - F| of the sample against a continuous CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidParameter("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// P(K > x) for the Kolmogorov limit law.
inline double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // numerically 1 to double precision
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Critical value of D_n at level alpha, with Stephens' finite-n correction
/// lambda / (sqrt n + 0.12 + 0.11 / sqrt n).
inline double ks_critical_value(std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0) || n == 0) throw InvalidParameter("ks_critical_value: bad arguments");
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::bisect([alpha](double x) { return kolmogorov_survival(x) - alpha; },
                                                   0.2, 5.0, tol, iters);
  const double lambda = 0.5 * (lo + hi);
  const double rn = std::sqrt(static_cast<double>(n));
  return lambda / (rn + 0.12 + 0.11 / rn);
}

inline constexpr double kKsLevel = 0.01;

// Compact decimal for test names, e.g. 0.5, 1.1, 3.
inline std::string format_short(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline double rayleigh_cdf(double gamma, double s) {
  return gamma <= 0.0 ? 0.0 : -std::expm1(-gamma * gamma / (4.0 * s));
}

enum class CurveGenerator { dynamics, envelope };

inline const char* to_string(CurveGenerator g) { return g == CurveGenerator::dynamics ? "dynamics" : "envelope"; }

/// Line windows for envelope queries at abscissa s. By default M = 50 / s and
/// B = 20: every excluded line sits at height >= 20 at s, far in the Rayleigh tail.
struct EnvelopeWindow {
  std::optional<double> M;
  double B = 20.0;
  double slope_bound(double s) const { return M.value_or(50.0 / s); }
};

/// Value and slope of the right seminal curve at s for replicate `i`.
inline std::pair<double, double> curve_point(const RngStream& base, std::size_t i, double s, CurveGenerator gen,
                                             const EnvelopeWindow& window = {}) {
  RngStream rs = replicate_stream(base, i);
  if (gen == CurveGenerator::dynamics) {
    CurveSource c = CurveSource::draw(rs, Orientation::right);
    c.extend_until(stop_below(s));
    const CurveVertex& v = c.curve.vertex(c.curve.segment_index(s));
    return {v.line_at(s), v.sigma};
  }
  const TruncatedLineSample lines =
      sample_lines(rs, LineSubclass::plus, window.slope_bound(s), window.B);
  const Envelope env = lower_envelope(lines, 0.0, 1.0);
  return {env.value(s), env.slope(s)};
}

/// KS test of Gamma(s) against survival exp(-g^2 / 4s). `scale` multiplies
/// every draw (1 for the real test, != 1 for power checks).
inline TestReport ks_rayleigh(const RngStream& stream, double s, std::size_t n, CurveGenerator gen,
                              double scale = 1.0, unsigned threads = 1, const EnvelopeWindow& window = {}) {
  if (!(s > 0.0 && s <= 1.0)) throw InvalidParameter("ks_rayleigh: s must lie in (0, 1]");
  if (n < 1000) throw InvalidParameter("ks_rayleigh: n >= 1000");
  auto values = map_replicates(n, threads, [&](std::size_t i) { return scale * curve_point(stream, i, s, gen, window).first; });
  TestReport r;
  r.name = "ks_rayleigh/" + std::string(to_string(gen)) + "/s=" + format_short(s);
  if (scale != 1.0) r.name += "/scale=" + format_short(scale);
  r.statistic = ks_statistic(std::move(values), [s](double g) { return rayleigh_cdf(g, s); });
  r.threshold = ks_critical_value(n, kKsLevel);
  r.n_samples = n;
  r.passed = r.statistic <= r.threshold;
  r.seed = stream.seed();
  return r;
}

/// KS test of s Gamma'(s) / Gamma(s) against Uniform[0, 1].
inline TestReport ks_slope_mark(const RngStream& stream, double s, std::size_t n, CurveGenerator gen,
                                unsigned threads = 1, const EnvelopeWindow& window = {}) {
  auto marks = map_replicates(n, threads, [&](std::size_t i) {
    const auto [g, slope] = curve_point(stream, i, s, gen, window);
    return s * slope / g;
  });
  TestReport r;
  r.name = "ks_slope_mark/" + std::string(to_string(gen)) + "/s=" + format_short(s);
  r.statistic = ks_statistic(std::move(marks), [](double x) { return std::clamp(x, 0.0, 1.0); });
  r.threshold = ks_critical_value(n, kKsLevel);
  r.n_samples = n;
  r.passed = r.statistic <= r.threshold;
  r.seed = stream.seed();
  return r;
}

// ---------------------------------------------------------------------------
// Intercept perpetuity

inline const double kMeanY0 = std::sqrt(std::numbers::pi) / 2.0;

/// Y_0 .. Y_n of one replicate, optionally with the squared-uniform corruption.
inline std::vector<CurveVertex> vertex_path(const RngStream& base, std::size_t i, std::size_t n, bool corrupt) {
  RngStream rs = replicate_stream(base, i);
  auto run = [n](auto& src) {
    std::vector<CurveVertex> path{draw_initial_state(src)};
    while (path.size() <= n) path.push_back(step_reverse(path.back(), src));
    return path;
  };
  if (corrupt) {
    SquaredUniformSource<RngStream> bad(rs);
    return run(bad);
  }
  return run(rs);
}

/// E[factor^n Y_n] = E[Y_0] = sqrt(pi)/2 for every n <= n_max (a martingale
/// when factor = 3). Statistic: max over n of |mean - sqrt(pi)/2| / SE.
inline TestReport martingale_check(const RngStream& stream, std::size_t n_max, std::size_t reps,
                                   double factor = 3.0, bool corrupt = false, unsigned threads = 1) {
  if (n_max > 15) throw InvalidParameter("martingale_check: n_max <= 15");
  const auto paths = map_replicates(reps, threads, [&](std::size_t i) { return vertex_path(stream, i, n_max, corrupt); });
  double worst = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    RunningStats st;
    const double scale = std::pow(factor, static_cast<double>(n));
    for (const auto& p : paths) st.push(scale * p[n].Y);
    worst = std::max(worst, std::abs(st.mean() - kMeanY0) / st.standard_error());
  }
  TestReport r;
  r.name = "martingale_check/n_max=" + std::to_string(n_max);
  if (factor != 3.0) r.name += "/factor=" + format_short(factor);
  r.statistic = worst;
  r.threshold = 3.0;
  r.n_samples = reps;
  r.passed = r.statistic <= r.threshold;
  r.seed = stream.seed();
  return r;
}

/// 3^n E[Y_n^3 / S_n] <= E[(3/10)^n Y_0^3 + (12/7) Y_0] (S_0 = 1). Statistic
/// is the mean of the paired difference lhs - rhs; threshold is 3 SE of it.
inline TestReport decay_check(const RngStream& stream, std::size_t n, std::size_t reps, double factor = 3.0,
                              unsigned threads = 1) {
  const auto diffs = map_replicates(reps, threads, [&](std::size_t i) {
    const auto p = vertex_path(stream, i, n, false);
    const double nn = static_cast<double>(n);
    const double lhs = std::pow(factor, nn) * p[n].Y * p[n].Y * p[n].Y / p[n].S;
    const double y0 = p[0].Y;
    const double rhs = std::pow(0.3, nn) * y0 * y0 * y0 / p[0].S + 12.0 / 7.0 * y0;
    return lhs - rhs;
  });
  RunningStats st;
  for (double d : diffs) st.push(d);
  TestReport r;
  r.name = "decay_check/n=" + std::to_string(n);
  if (factor != 3.0) r.name += "/factor=" + format_short(factor);
  r.statistic = st.mean();
  r.threshold = 3.0 * st.standard_error();
  r.n_samples = reps;
  r.passed = r.statistic <= r.threshold;
  r.seed = stream.seed();
  return r;
}

// ---------------------------------------------------------------------------
// Moments

struct MomentIdentity {
  std::string name;
  double exact;
  std::function<double(double)> of_uniform;  // integrand in u on (0,1); empty for the Gamma(1) moment
};

inline std::vector<MomentIdentity> moment_identities() {
  return {
      {"E[1-sqrtU]", 1.0 / 3.0, [](double u) { return 1.0 - std::sqrt(u); }},
      {"E[(1-sqrtU)^2]", 1.0 / 6.0, [](double u) { return std::pow(1.0 - std::sqrt(u), 2); }},
      {"E[(1-sqrtU)^3]", 1.0 / 10.0, [](double u) { return std::pow(1.0 - std::sqrt(u), 3); }},
      {"E[(1-sqrtU)/sqrtU]", 1.0, [](double u) { return (1.0 - std::sqrt(u)) / std::sqrt(u); }},
      {"E[(1-sqrtU)^3/sqrtU]", 0.5, [](double u) { return std::pow(1.0 - std::sqrt(u), 3) / std::sqrt(u); }},
      {"E[Gamma(1)^2]", 4.0, {}},
  };
}

/// Checks each identity empirically (n draws, 3 SE band) and by numerical
/// quadrature (1e-10). `corrupt` replaces U by U^2 in the sampler.
inline std::vector<TestReport> moment_unit_checks(const RngStream& stream, std::size_t n = 1'000'000,
                                                  bool corrupt = false) {
  std::vector<TestReport> reports;
  const auto ids = moment_identities();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const MomentIdentity& id = ids[k];
    RngStream rs = stream.fork(100 + k);
    RunningStats st;
    double quad = 0.0;
    if (id.of_uniform) {
      for (std::size_t i = 0; i < n; ++i) {
        double u = rs.uniform01();
        if (corrupt) u *= u;
        st.push(id.of_uniform(u));
      }
      boost::math::quadrature::tanh_sinh<double> integrator;
      quad = integrator.integrate(id.of_uniform, 0.0, 1.0);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double g = rayleigh(rs, 1.0);
        st.push(g * g);
      }
      boost::math::quadrature::exp_sinh<double> integrator;
      quad = integrator.integrate([](double g) { return g > 100.0 ? 0.0 : g * g * 0.5 * g * std::exp(-0.25 * g * g); });
    }
    TestReport emp;
    emp.name = "moment_unit_checks/" + id.name + "/empirical";
    emp.statistic = std::abs(st.mean() - id.exact);
    emp.threshold = 3.0 * st.standard_error();
    emp.n_samples = n;
    emp.passed = emp.statistic <= emp.threshold;
    emp.seed = stream.seed();
    reports.push_back(emp);

    TestReport q;
    q.name = "moment_unit_checks/" + id.name + "/quadrature";
    q.statistic = std::abs(quad - id.exact);
    q.threshold = 1e-10;
    q.n_samples = 0;
    q.passed = q.statistic <= q.threshold;
    q.seed = stream.seed();
    reports.push_back(q);
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Flow

inline const double kProductTermMean = 4.0 * std::numbers::pi / 9.0;

/// Mean of T over `reps` replicates against `calibration` (2 by default):
/// pass iff |mean - calibration| <= 3 SE + eps + l1_error_bound(N). A second
/// report checks the product-of-integrals term against 4 pi / 9 within 3 SE + eps.
inline std::vector<TestReport> mean_flow_experiment(const RngStream& stream, std::size_t N, double eps,
                                                    std::size_t reps, unsigned threads = 1,
                                                    double calibration = 2.0) {
  const auto estimates = map_replicates(reps, threads, [&](std::size_t i) {
    return sample_total_flow(replicate_stream(stream, i), N, eps);
  });
  RunningStats value, product;
  for (const FlowEstimate& e : estimates) {
    value.push(e.value);
    product.push(e.product_term);
  }
  TestReport mean;
  mean.name = "mean_flow_experiment/N=" + std::to_string(N);
  mean.statistic = std::abs(value.mean() - calibration);
  mean.threshold = 3.0 * value.standard_error() + eps + l1_error_bound(N);
  mean.n_samples = reps;
  mean.passed = mean.statistic <= mean.threshold;
  mean.seed = stream.seed();

  TestReport prod;
  prod.name = "mean_flow_experiment/product_term";
  prod.statistic = std::abs(product.mean() - kProductTermMean);
  prod.threshold = 3.0 * product.standard_error() + eps;
  prod.n_samples = reps;
  prod.passed = prod.statistic <= prod.threshold;
  prod.seed = stream.seed();
  return {mean, prod};
}

/// Mean over shared-stream replicates of |T(N_lo) - T(N_hi)|: both depths are
/// computed on the same four curves. Threshold is l1_error_bound(N_lo) plus
/// the two deterministic bracket budgets (3 eps / 2 each).
inline TestReport truncation_check(const RngStream& stream, std::size_t n_lo, std::size_t n_hi, double eps,
                                   std::size_t reps, unsigned threads = 1) {
  const auto diffs = map_replicates(reps, threads, [&](std::size_t i) {
    const RngStream rs = replicate_stream(stream, i);
    auto half = [&](std::uint64_t tag) {
      auto [minus, plus] = draw_curve_pair(rs.fork(tag));
      CurveSource minus_copy = minus;
      CurveSource plus_copy = plus;
      const double lo = estimate_half_plane(minus, plus, n_lo, eps).value;
      const double hi = estimate_half_plane(minus_copy, plus_copy, n_hi, eps).value;
      return std::pair{lo, hi};
    };
    const auto [up_lo, up_hi] = half(kTagUpperHalf);
    const auto [dn_lo, dn_hi] = half(kTagLowerHalf);
    return std::abs(0.5 * (up_lo + dn_lo) - 0.5 * (up_hi + dn_hi));
  });
  RunningStats st;
  for (double d : diffs) st.push(d);
  TestReport r;
  r.name = "truncation_check/N=" + std::to_string(n_lo) + "_vs_" + std::to_string(n_hi);
  r.statistic = st.mean();
  r.threshold = l1_error_bound(n_lo) + 3.0 * eps;
  r.n_samples = reps;
  r.passed = r.statistic <= r.threshold;
  r.seed = stream.seed();
  return r;
}

/// Largest relative defect, over every step of every replicate, of
/// Y_{n+1} = Y_n (1 - sqrt U_{n+1}) against the geometric intercept
/// Gamma(S_{n+1}) - S_{n+1} sigma_{n+1}, measured relative to Gamma(S_{n+1}).
inline TestReport pathwise_identity_check(const RngStream& stream, std::size_t n_max, std::size_t reps,
                                          unsigned threads = 1) {
  const auto worst = map_replicates(reps, threads, [&](std::size_t i) {
    const auto p = vertex_path(stream, i, n_max, false);
    double w = 0.0;
    for (std::size_t n = 0; n + 1 < p.size(); ++n) {
      const CurveVertex& a = p[n];
      const CurveVertex& b = p[n + 1];
      const double gamma = a.line_at(b.S);
      const double geometric = gamma - b.S * b.sigma;
      const double perpetuity = a.Y * (1.0 - std::sqrt(b.u));
      w = std::max(w, std::abs(geometric - perpetuity) / gamma);
    }
    return w;
  });
  TestReport r;
  r.name = "pathwise_identity_check/n_max=" + std::to_string(n_max);
  r.statistic = *std::max_element(worst.begin(), worst.end());
  r.threshold = 1e-12;
  r.n_samples = reps;
  r.passed = r.statistic <= r.threshold;
  r.seed = stream.seed();
  return r;
}

/// Monte Carlo and quadrature box volumes on `realizations` independent line
/// realizations, plus the empty realization. Statistic: worst
/// |mc - quad| / (3 SE + quadrature bound); the empty case must be exact.
inline TestReport box_oracle_check(const RngStream& stream, std::size_t realizations, const BoxVolumeParams& params,
                                   unsigned threads = 1) {
  const auto ratios = map_replicates(realizations, threads, [&](std::size_t i) {
    RngStream rs = replicate_stream(stream, i);
    const BoxVolume v = box_volume_two_ways(rs, params);
    return std::abs(v.mc - v.quad) / (3.0 * v.mc_se + v.quad_error_bound);
  });
  RngStream empty_stream = stream.fork(7);
  const BoxVolume empty = box_volume_two_ways(std::vector<Line>{}, empty_stream, params);
  const double h2 = params.H * params.H;
  const bool empty_exact = empty.mc == h2 && empty.quad == h2;

  TestReport r;
  r.name = "box_oracle_check/H=" + format_short(params.H);
  r.statistic = empty_exact ? *std::max_element(ratios.begin(), ratios.end()) : std::numeric_limits<double>::infinity();
  r.threshold = 1.0;
  r.n_samples = realizations;
  r.passed = r.statistic <= r.threshold;
  r.seed = stream.seed();
  return r;
}

/// Pathwise comparison, on windowed realizations of both slope classes, of
/// connectivity read off the two envelopes through their component lines
/// against literal separation by every line. Points have abscissae in
/// [margin, 1) so the windows M = H / margin, B = H are exact for them.
/// Statistic: fraction of pairs on which the two disagree (threshold 0).
inline TestReport decomposition_cross_check(const RngStream& stream, std::size_t realizations, std::size_t pairs,
                                            double H = 3.0, double margin = 0.05, unsigned threads = 1) {
  const auto disagreements = map_replicates(realizations, threads, [&](std::size_t i) {
    RngStream rs = replicate_stream(stream, i);
    RngStream line_stream = rs.fork(1);
    RngStream point_stream = rs.fork(2);
    const double M = H / margin;
    const TruncatedLineSample plus = sample_lines(line_stream, LineSubclass::plus, M, H);
    const TruncatedLineSample minus = sample_lines(line_stream, LineSubclass::minus, M, H);
    const SeminalCurve gp = lower_envelope(plus, margin, 1.0).to_curve(Orientation::right);
    const SeminalCurve gm = lower_envelope(mirrored(minus), margin, 1.0).to_curve(Orientation::left);
    std::vector<Line> all = plus.lines;
    all.insert(all.end(), minus.lines.begin(), minus.lines.end());
    std::size_t bad = 0;
    for (std::size_t k = 0; k < pairs; ++k) {
      const Point p1{-(margin + (1.0 - margin) * point_stream.uniform01()), H * point_stream.uniform01()};
      const Point p2{margin + (1.0 - margin) * point_stream.uniform01(), H * point_stream.uniform01()};
      if (decomposition_indicator(gm, gp, p1, p2) != connected_given(all, p1, p2)) ++bad;
    }
    return bad;
  });
  std::size_t bad = 0;
  for (std::size_t b : disagreements) bad += b;
  TestReport r;
  r.name = "decomposition_cross_check";
  r.statistic = static_cast<double>(bad) / static_cast<double>(realizations * pairs);
  r.threshold = 0.0;
  r.n_samples = realizations * pairs;
  r.passed = r.statistic <= r.threshold;
  r.seed = stream.seed();
  return r;
}

// ---------------------------------------------------------------------------
// Battery

struct BatteryConfig {
  std::uint64_t seed = 20240607;
  unsigned threads = 1;
  std::size_t ks_samples = 10'000;
  std::size_t martingale_reps = 100'000;
  std::size_t martingale_n_max = 10;
  std::size_t decay_reps = 100'000;
  std::size_t moment_samples = 1'000'000;
  std::size_t flow_reps = 100'000;
  std::size_t flow_depth = 20;
  double eps = 1e-4;
  std::size_t truncation_reps = 10'000;
  std::size_t box_realizations = 20;
  BoxVolumeParams box;
  std::size_t cross_realizations = 200;
  std::size_t cross_pairs = 1'000;
  bool corrupt_sampler = false;
};

// Per-check root streams; distinct tags keep the checks independent.
enum BatteryTag : std::uint64_t {
  kTagKs = 11,
  kTagSlopeMark = 12,
  kTagMartingale = 13,
  kTagPathwise = 14,
  kTagDecay = 15,
  kTagMoments = 16,
  kTagFlow = 17,
  kTagTruncation = 18,
  kTagBox = 19,
  kTagCross = 20,
};

inline RngStream battery_stream(std::uint64_t seed, BatteryTag tag) { return RngStream(seed, 0, tag); }

/// Every check at its default scale. `corrupt_sampler` swaps U for U^2 in the
/// perpetuity and moment checks.
inline std::vector<TestReport> run_validation_battery(const BatteryConfig& c) {
  std::vector<TestReport> out;
  for (CurveGenerator gen : {CurveGenerator::dynamics, CurveGenerator::envelope}) {
    for (double s : {1.0, 0.5, 0.25}) {
      out.push_back(ks_rayleigh(battery_stream(c.seed, kTagKs).fork(static_cast<std::uint64_t>(gen)), s,
                                c.ks_samples, gen, 1.0, c.threads));
    }
    out.push_back(ks_slope_mark(battery_stream(c.seed, kTagSlopeMark).fork(static_cast<std::uint64_t>(gen)), 0.5,
                                c.ks_samples, gen, c.threads));
  }
  out.push_back(martingale_check(battery_stream(c.seed, kTagMartingale), c.martingale_n_max, c.martingale_reps, 3.0,
                                 c.corrupt_sampler, c.threads));
  out.push_back(pathwise_identity_check(battery_stream(c.seed, kTagPathwise), c.martingale_n_max,
                                        c.martingale_reps, c.threads));
  for (std::size_t n : {4u, 8u}) {
    out.push_back(decay_check(battery_stream(c.seed, kTagDecay).fork(n), n, c.decay_reps, 3.0, c.threads));
  }
  for (TestReport& r : moment_unit_checks(battery_stream(c.seed, kTagMoments), c.moment_samples, c.corrupt_sampler)) {
    out.push_back(std::move(r));
  }
  for (TestReport& r :
       mean_flow_experiment(battery_stream(c.seed, kTagFlow), c.flow_depth, c.eps, c.flow_reps, c.threads)) {
    out.push_back(std::move(r));
  }
  out.push_back(truncation_check(battery_stream(c.seed, kTagTruncation), 5, 25, c.eps, c.truncation_reps, c.threads));
  out.push_back(box_oracle_check(battery_stream(c.seed, kTagBox), c.box_realizations, c.box, c.threads));
  out.push_back(decomposition_cross_check(battery_stream(c.seed, kTagCross), c.cross_realizations, c.cross_pairs, 3.0,
                                          0.05, c.threads));
  return out;
}

inline bool all_passed(const std::vector<TestReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const TestReport& r) { return r.passed; });
}

}  // namespace pcity
