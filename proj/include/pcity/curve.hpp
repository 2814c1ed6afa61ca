#pragma once

// Seminal curves simulated by their reverse-time dynamics.
//
// A curve is stored in its own coordinates s in (0,1] as a concave increasing
// piecewise-linear function. Vertex n carries the tangent line l_n with
// intercept Y_n and slope sigma_n, active on (S_{n+1}, S_n]. The left curve is
// kept mirrored (s = -x), so both orientations share one representation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcity/errors.hpp"
#include "pcity/rng.hpp"

namespace pcity {

enum class Orientation { right, left };

inline const char* to_string(Orientation o) { return o == Orientation::right ? "right" : "left"; }

struct CurveVertex {
  std::size_t n = 0;
  double S = 1.0;      // change-of-slope abscissa
  double Y = 0.0;      // y-intercept of the tangent line
  double sigma = 0.0;  // slope of the tangent line, Gamma'(S)
  // Innovations that produced this vertex: (E, U) of the step, or for n = 0
  // the exponential behind Gamma(1) and the uniform slope mark.
  double e = std::numeric_limits<double>::quiet_NaN();
  double u = std::numeric_limits<double>::quiet_NaN();

  /// Gamma(S), the curve value at the vertex.
  double value() const { return Y + S * sigma; }
  double line_at(double s) const { return Y + s * sigma; }
};

/// Lower and upper bound on an integral; used for curve integrals and areas.
struct AreaBracket {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Initial state at s = 1: Gamma(1) ~ Rayleigh(sqrt 2), slope ~ Uniform[0, Gamma(1)].
template <VariateSource Src>
CurveVertex draw_initial_state(Src& stream) {
  for (;;) {
    const double e = stream.exponential1();
    const double u = stream.uniform01();
    const double g = rayleigh_from_exponential(1.0, e);
    const double sigma = u * g;
    const double y = g - sigma;
    if (y > 0.0 && sigma > 0.0) {
      return CurveVertex{0, 1.0, y, sigma, e, u};
    }
  }
}

/// One step of the reverse-time dynamics:
///   1/S' = 1/S + 4E/Y^2,  sigma' = sigma + (Y/S') sqrt(U),  Y' = Y (1 - sqrt U).
template <VariateSource Src>
CurveVertex step_reverse(const CurveVertex& v, Src& stream) {
  const double e = stream.exponential1();
  const double u = stream.uniform01();
  const double root_u = std::sqrt(u);
  CurveVertex next;
  next.n = v.n + 1;
  next.S = 1.0 / (1.0 / v.S + 4.0 * e / (v.Y * v.Y));
  next.sigma = v.sigma + (v.Y / next.S) * root_u;
  next.Y = v.Y * (1.0 - root_u);
  next.e = e;
  next.u = u;
  return next;
}

class SeminalCurve {
 public:
  explicit SeminalCurve(CurveVertex initial, Orientation orientation = Orientation::right)
      : orientation_(orientation) {
    initial.n = 0;
    check_vertex(initial);
    if (initial.S != 1.0) {
      throw InvalidParameter("SeminalCurve: first vertex must sit at S = 1");
    }
    vertices_.push_back(initial);
    tail_s_ = initial.S;
  }

  /// Builds a curve from explicit vertices, e.g. for fixtures. A `tail_s`
  /// below the last vertex lets the last tangent line extend down to it; such
  /// a curve has a pinned tail and can no longer be extended by the dynamics.
  static SeminalCurve from_vertices(std::vector<CurveVertex> vertices, Orientation orientation,
                                    std::optional<double> tail_s = std::nullopt) {
    if (vertices.empty()) {
      throw InvalidParameter("SeminalCurve: vertex list is empty");
    }
    SeminalCurve curve(vertices.front(), orientation);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      vertices[i].n = i;
      curve.append(vertices[i]);
    }
    if (tail_s) {
      if (!(*tail_s > 0.0) || *tail_s > curve.vertices_.back().S) {
        throw InvalidParameter("SeminalCurve: tail_s must lie in (0, S_last]");
      }
      curve.tail_s_ = *tail_s;
    }
    return curve;
  }

  const std::vector<CurveVertex>& vertices() const { return vertices_; }
  const CurveVertex& vertex(std::size_t n) const { return vertices_.at(n); }
  const CurveVertex& back() const { return vertices_.back(); }
  std::size_t size() const { return vertices_.size(); }
  Orientation orientation() const { return orientation_; }
  double tail_s() const { return tail_s_; }
  bool pinned_tail() const { return tail_s_ < vertices_.back().S; }

  /// Appends the next vertex; enforces monotone S and sigma and a positive intercept.
  void append(const CurveVertex& v) {
    if (pinned_tail()) {
      throw InvalidParameter("SeminalCurve: cannot extend a curve with a pinned tail");
    }
    check_vertex(v);
    const CurveVertex& last = vertices_.back();
    if (!(v.S < last.S) || !(v.sigma > last.sigma)) {
      throw InvalidParameter("SeminalCurve: vertices must have decreasing S and increasing slope");
    }
    vertices_.push_back(v);
    vertices_.back().n = vertices_.size() - 1;
    tail_s_ = v.S;
  }

  /// Index n of the tangent line active at s, i.e. S_n >= s > S_{n+1}.
  std::size_t segment_index(double s) const {
    if (!(s >= tail_s_ && s <= 1.0)) {
      throw OutOfRange("curve_value: s = " + std::to_string(s) + " outside [tail_s, 1]");
    }
    // First vertex with S < s; the active line is the one before it.
    const auto it = std::partition_point(vertices_.begin(), vertices_.end(),
                                         [s](const CurveVertex& v) { return v.S >= s; });
    return static_cast<std::size_t>(it - vertices_.begin()) - 1;
  }

  /// Gamma(s) for s in [tail_s, 1].
  double value(double s) const { return vertices_[segment_index(s)].line_at(s); }

  /// Integral of Gamma over (0,1]: exact on [tail_s, 1], and the tail (0, tail_s)
  /// contributes between 0 and tail_s * Gamma(tail_s).
  AreaBracket integral_bracket() const {
    double exact = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const CurveVertex& v = vertices_[i];
      const double hi = v.S;
      const double lo = i + 1 < vertices_.size() ? vertices_[i + 1].S : tail_s_;
      exact += (hi - lo) * (v.Y + 0.5 * v.sigma * (hi + lo));
    }
    return {exact, exact + tail_mass()};
  }

  /// tail_s * Gamma(tail_s), the bound on everything left unrepresented.
  double tail_mass() const { return tail_s_ * vertices_.back().line_at(tail_s_); }

  /// Gamma^{-1}(eps), with the convention Gamma^{-1}(eps) = 1 above Gamma(1).
  double inverse(double eps) const {
    if (!(eps > 0.0)) {
      throw InvalidParameter("curve_inverse: eps must be positive");
    }
    if (eps > vertices_.front().value()) {
      return 1.0;
    }
    if (eps < vertices_.back().line_at(tail_s_)) {
      throw NeedsExtension("curve_inverse: eps is below the represented range; extend the curve");
    }
    // Segment n spans values [Gamma(S_{n+1}), Gamma(S_n)].
    const auto it = std::partition_point(vertices_.begin(), vertices_.end(),
                                         [eps](const CurveVertex& v) { return v.value() >= eps; });
    const std::size_t n = it == vertices_.begin() ? 0 : static_cast<std::size_t>(it - vertices_.begin()) - 1;
    const CurveVertex& v = vertices_[n];
    const double lo = n + 1 < vertices_.size() ? vertices_[n + 1].S : tail_s_;
    return std::clamp((eps - v.Y) / v.sigma, lo, v.S);
  }

 private:
  static void check_vertex(const CurveVertex& v) {
    if (!(v.S > 0.0 && v.S <= 1.0) || !(v.Y > 0.0) || !(v.sigma > 0.0) || !std::isfinite(v.Y) ||
        !std::isfinite(v.sigma)) {
      throw InvalidParameter("SeminalCurve: vertex needs S in (0,1], Y > 0, sigma > 0, all finite");
    }
  }

  std::vector<CurveVertex> vertices_;
  Orientation orientation_;
  double tail_s_ = 1.0;
};

inline double curve_value(const SeminalCurve& curve, double s) { return curve.value(s); }
inline AreaBracket curve_integral_bracket(const SeminalCurve& curve) { return curve.integral_bracket(); }
inline double curve_inverse(const SeminalCurve& curve, double eps) { return curve.inverse(eps); }

using StopPredicate = std::function<bool(const CurveVertex&)>;

// Common stop rules for extend_until.
inline StopPredicate stop_at_depth(std::size_t n) {
  return [n](const CurveVertex& v) { return v.n >= n; };
}
inline StopPredicate stop_below(double s) {
  return [s](const CurveVertex& v) { return v.S <= s; };
}
inline StopPredicate stop_tail_mass(double delta) {
  return [delta](const CurveVertex& v) { return v.S * v.value() <= delta; };
}

inline constexpr std::size_t kDefaultMaxSteps = 1'000'000;

/// Extends `curve` by reverse steps drawn from `stream` until `stop` holds on
/// the last vertex. The stream must be dedicated to this curve, so the vertex
/// sequence does not depend on when or by whom extension is triggered.
template <VariateSource Src, class Stop>
SeminalCurve& extend_until(SeminalCurve& curve, Src& stream, Stop&& stop,
                           std::size_t max_steps = kDefaultMaxSteps) {
  std::size_t steps = 0;
  while (!stop(curve.back())) {
    if (steps++ >= max_steps) {
      throw DivergenceError("extend_until: step cap of " + std::to_string(max_steps) + " exceeded");
    }
    const CurveVertex next = step_reverse(curve.back(), stream);
    if (!(next.S > 0.0) || !(next.Y > 0.0) || !std::isfinite(next.sigma)) {
      throw DivergenceError("extend_until: state left floating-point range at n = " +
                            std::to_string(next.n));
    }
    curve.append(next);
  }
  return curve;
}

/// A curve bundled with the stream that generates it.
struct CurveSource {
  SeminalCurve curve;
  RngStream stream;

  static CurveSource draw(RngStream stream, Orientation orientation) {
    const CurveVertex v0 = draw_initial_state(stream);
    return CurveSource{SeminalCurve(v0, orientation), std::move(stream)};
  }

  template <class Stop>
  SeminalCurve& extend_until(Stop&& stop, std::size_t max_steps = kDefaultMaxSteps) {
    return pcity::extend_until(curve, stream, std::forward<Stop>(stop), max_steps);
  }
};

}  // namespace pcity
