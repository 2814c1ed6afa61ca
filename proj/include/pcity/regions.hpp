#pragma once

// Areas of the regions Delta_n, tilde Delta_n and C_n that enter the flow
// decomposition, plus exact integration of min(curve, line).

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "pcity/curve.hpp"
#include "pcity/errors.hpp"

namespace pcity {

/// Tangent line of a seminal curve in the curve's own coordinates: height
/// Y + sigma s for s > 0. Continued across the y-axis into the mirrored
/// coordinates t = -s of the opposite curve it reads Y - sigma t.
struct TangentLine {
  double Y = 0.0;
  double sigma = 0.0;

  static TangentLine of(const CurveVertex& v) { return {v.Y, v.sigma}; }

  double height(double s) const { return Y + sigma * s; }
  double mirrored_height(double t) const { return Y - sigma * t; }
  /// Where the mirrored line hits the x-axis.
  double axis_crossing() const { return Y / sigma; }
};

/// Triangle bounded by l_n, l_{n+1} and the x = 1 axis: (1 - S_{n+1})^2 (sigma_{n+1} - sigma_n) / 2.
inline double delta_area(const CurveVertex& v, const CurveVertex& next) {
  const double base = 1.0 - next.S;
  return 0.5 * base * base * (next.sigma - v.sigma);
}

/// Triangle bounded by l_n, the x-axis and the y-axis: Y^2 / (2 sigma).
inline double delta_tilde_area(const CurveVertex& v) { return 0.5 * v.Y * v.Y / v.sigma; }

namespace detail {

// Integral of a + b t over [lo, hi].
inline double linear_integral(double a, double b, double lo, double hi) {
  return (hi - lo) * (a + 0.5 * b * (hi + lo));
}

}  // namespace detail

/// Exact integral over [a, b] of min(Gamma(t), Y - sigma t) for a curve in its
/// own coordinates and a line read in mirrored coordinates. On each curve
/// segment the difference is increasing, so there is at most one crossing.
inline double integral_min_linear(const SeminalCurve& curve, const TangentLine& line, double a, double b) {
  if (!(a >= curve.tail_s() && b <= 1.0 && a <= b)) {
    throw OutOfRange("integral_min_linear: [a, b] must lie inside [tail_s, 1]");
  }
  const auto& vs = curve.vertices();
  double total = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double seg_hi = std::min(vs[i].S, b);
    const double seg_lo = std::max(i + 1 < vs.size() ? vs[i + 1].S : curve.tail_s(), a);
    if (seg_hi <= seg_lo) {
      if (vs[i].S <= a) break;
      continue;
    }
    const double cy = vs[i].Y;
    const double cs = vs[i].sigma;
    // curve - line = (cy - Y) + (cs + sigma) t vanishes at t = crossing.
    const double crossing = (line.Y - cy) / (cs + line.sigma);
    if (crossing <= seg_lo) {
      total += detail::linear_integral(line.Y, -line.sigma, seg_lo, seg_hi);
    } else if (crossing >= seg_hi) {
      total += detail::linear_integral(cy, cs, seg_lo, seg_hi);
    } else {
      total += detail::linear_integral(cy, cs, seg_lo, crossing) +
               detail::linear_integral(line.Y, -line.sigma, crossing, seg_hi);
    }
  }
  return total;
}

/// Bracket on the area of C: the integral over (0,1] of min(Gamma_opp(t), (Y - sigma t)_+).
///
/// The part on [tail_s, 1] is integrated exactly. On (0, m), m = min(tail_s, Y/sigma, 1),
/// the integrand lies between 0 and min(Gamma_opp(tail_s), Y - sigma t), so the tail
/// contributes at most min(m Gamma_opp(tail_s), integral of the line over (0, m)).
/// The opposite curve is extended with `stream` until the bracket width is at most `tol`.
template <VariateSource Src>
AreaBracket c_region_area(const TangentLine& line, SeminalCurve& opposite, Src& stream, double tol,
                          std::size_t max_steps = kDefaultMaxSteps) {
  if (!(tol > 0.0)) {
    throw InvalidParameter("c_region_area: tolerance must be positive");
  }
  const double support = std::min(1.0, line.axis_crossing());
  // Tail bound when the represented range ends at vertex v.
  auto tail_upper = [&](const CurveVertex& v, double tail_s) {
    const double m = std::min(tail_s, support);
    const double by_curve = m * v.line_at(tail_s);
    const double by_line = detail::linear_integral(line.Y, -line.sigma, 0.0, m);
    return std::min(by_curve, by_line);
  };

  if (tail_upper(opposite.back(), opposite.tail_s()) > tol) {
    if (opposite.pinned_tail()) {
      throw NeedsExtension("c_region_area: tolerance not reachable on a curve with a pinned tail");
    }
    extend_until(opposite, stream, [&](const CurveVertex& v) { return tail_upper(v, v.S) <= tol; },
                 max_steps);
  }

  double exact = 0.0;
  if (opposite.tail_s() < support) {
    exact = integral_min_linear(opposite, line, opposite.tail_s(), support);
  }
  return {exact, exact + tail_upper(opposite.back(), opposite.tail_s())};
}

}  // namespace pcity
