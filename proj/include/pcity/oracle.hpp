#pragma once

// Brute-force pathway built from literal line realizations, independent of
// the curve dynamics: windowed samples of the improper line process, lower
// envelopes, separation tests and box-restricted flow volumes.
//
// Lines are y = b + sigma x. The intensity dy_- dy_+ / 4 in strip-boundary
// intercepts y_{-/+} = b -/+ sigma reads (1/2) db dsigma in (b, sigma).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "pcity/curve.hpp"
#include "pcity/errors.hpp"
#include "pcity/rng.hpp"

namespace pcity {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Line {
  double sigma = 0.0;
  double b = 0.0;

  static Line from_intercepts(double y_minus, double y_plus) {
    return {0.5 * (y_plus - y_minus), 0.5 * (y_plus + y_minus)};
  }
  double height(double x) const { return b + sigma * x; }
  double y_minus() const { return b - sigma; }
  double y_plus() const { return b + sigma; }
};

/// plus: sigma > 0, b > 0. minus: sigma < 0, b > 0. general: both signs.
enum class LineSubclass { plus, minus, general };

struct TruncatedLineSample {
  std::vector<Line> lines;
  double M = 0.0;  // slope bound
  double B = 0.0;  // intercept window
  LineSubclass subclass = LineSubclass::plus;
};

/// Poisson realization in the window |sigma| <= M, 0 < b <= B (|b| <= B for
/// `general`), intensity (1/2) db dsigma: mean count M B / 2 per sign class.
inline TruncatedLineSample sample_lines(RngStream& stream, LineSubclass subclass, double M, double B) {
  if (!(M > 0.0) || !(B > 0.0)) {
    throw InvalidParameter("sample_lines: M and B must be positive");
  }
  const double mean = subclass == LineSubclass::general ? 2.0 * M * B : 0.5 * M * B;
  std::poisson_distribution<std::size_t> count_dist(mean);
  const std::size_t count = count_dist(stream);

  TruncatedLineSample sample{{}, M, B, subclass};
  sample.lines.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // 1 - u keeps b and |sigma| in (0, B] and (0, M].
    double b = B * (1.0 - stream.uniform01());
    double sigma = M * (1.0 - stream.uniform01());
    if (subclass == LineSubclass::minus) {
      sigma = -sigma;
    } else if (subclass == LineSubclass::general) {
      b = B * (2.0 * stream.uniform01() - 1.0);
      sigma = M * (2.0 * stream.uniform01() - 1.0);
    }
    sample.lines.push_back({sigma, b});
  }
  return sample;
}

/// Reflection x -> -x; maps the minus class onto the plus class.
inline TruncatedLineSample mirrored(TruncatedLineSample sample) {
  for (Line& l : sample.lines) l.sigma = -l.sigma;
  if (sample.subclass == LineSubclass::plus) {
    sample.subclass = LineSubclass::minus;
  } else if (sample.subclass == LineSubclass::minus) {
    sample.subclass = LineSubclass::plus;
  }
  return sample;
}

struct EnvelopePiece {
  double from = 0.0;
  double to = 0.0;
  Line line;
};

/// Pointwise minimum of finitely many lines on [lo, hi]; pieces ordered by x
/// with strictly decreasing slopes.
class Envelope {
 public:
  Envelope(std::vector<EnvelopePiece> pieces, double lo, double hi)
      : pieces_(std::move(pieces)), lo_(lo), hi_(hi) {}

  const std::vector<EnvelopePiece>& pieces() const { return pieces_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  const EnvelopePiece& piece_at(double x) const {
    if (!(x >= lo_ && x <= hi_)) {
      throw OutOfRange("Envelope: x outside the domain");
    }
    const auto it = std::partition_point(pieces_.begin(), pieces_.end(),
                                         [x](const EnvelopePiece& p) { return p.to < x; });
    return it == pieces_.end() ? pieces_.back() : *it;
  }

  double value(double x) const { return piece_at(x).line.height(x); }
  double slope(double x) const { return piece_at(x).line.sigma; }

  /// Reads a plus-class envelope on [lo, 1] as a seminal curve (vertices from
  /// s = 1 downward, tail pinned at lo).
  SeminalCurve to_curve(Orientation orientation) const {
    if (hi_ != 1.0 || !(lo_ > 0.0)) {
      throw InvalidInput("Envelope::to_curve: domain must be [lo, 1] with lo > 0");
    }
    std::vector<CurveVertex> vertices;
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
      CurveVertex v;
      v.n = vertices.size();
      v.S = it->to;
      v.Y = it->line.b;
      v.sigma = it->line.sigma;
      vertices.push_back(v);
    }
    return SeminalCurve::from_vertices(std::move(vertices), orientation, lo_);
  }

 private:
  std::vector<EnvelopePiece> pieces_;
  double lo_;
  double hi_;
};

/// Lower envelope by the dual convex hull: sort by slope (steepest first, which
/// is lowest as x -> -inf), drop dominated lines with a monotone stack, then
/// clip to [lo, hi]. O(n log n).
inline Envelope lower_envelope(std::vector<Line> lines, double lo, double hi) {
  if (lines.empty()) {
    throw NoEnvelope("lower_envelope: no lines");
  }
  if (!(lo < hi)) {
    throw InvalidParameter("lower_envelope: empty domain");
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return a.sigma != b.sigma ? a.sigma > b.sigma : a.b < b.b;
  });
  // Crossing abscissa of lines a and b with a steeper than b.
  auto crossing = [](const Line& a, const Line& b) { return (b.b - a.b) / (a.sigma - b.sigma); };

  std::vector<Line> hull;
  for (const Line& l : lines) {
    if (!hull.empty() && hull.back().sigma == l.sigma) continue;  // parallel and higher
    while (hull.size() >= 2 && crossing(hull[hull.size() - 2], l) <= crossing(hull[hull.size() - 2], hull.back())) {
      hull.pop_back();
    }
    hull.push_back(l);
  }

  std::vector<EnvelopePiece> pieces;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const double from = i == 0 ? lo : std::max(lo, crossing(hull[i - 1], hull[i]));
    const double to = i + 1 == hull.size() ? hi : std::min(hi, crossing(hull[i], hull[i + 1]));
    if (to > from) pieces.push_back({from, to, hull[i]});
  }
  return Envelope(std::move(pieces), lo, hi);
}

inline Envelope lower_envelope(const TruncatedLineSample& sample, double lo, double hi) {
  return lower_envelope(sample.lines, lo, hi);
}

/// True iff p1 and p2 lie strictly on one side of the line and the origin strictly on the other.
inline bool separates(const Line& line, Point p1, Point p2) {
  const double s1 = p1.y - line.height(p1.x);
  const double s2 = p2.y - line.height(p2.x);
  const double s0 = -line.b;
  return (s1 > 0.0 && s2 > 0.0 && s0 < 0.0) || (s1 < 0.0 && s2 < 0.0 && s0 > 0.0);
}

/// Indicator that no line of the realization separates the pair from the origin.
inline bool connected_given(const std::vector<Line>& lines, Point p1, Point p2) {
  return std::none_of(lines.begin(), lines.end(), [&](const Line& l) { return separates(l, p1, p2); });
}

namespace detail {

inline void check_quadrant_pair(Point p1, Point p2) {
  if (!(p1.x > -1.0 && p1.x < 0.0 && p1.y > 0.0) || !(p2.x > 0.0 && p2.x < 1.0 && p2.y > 0.0)) {
    throw InvalidInput("point pair must lie in the open quadrants Q- x Q+");
  }
}

}  // namespace detail

/// Windows that contain every line able to separate the pair from the origin.
/// A separating line has b > 0 and lies below both points, which bounds
/// b < max(y1, y2) and |sigma| < max(y1/|x1|, y2/x2).
inline std::pair<double, double> separating_window(Point p1, Point p2) {
  return {std::max(p1.y / -p1.x, p2.y / p2.x), std::max(p1.y, p2.y)};
}

/// Exact draw of 1[o on the boundary of the cell of (p1, p2)] from a fresh realization.
inline bool boundary_indicator(Point p1, Point p2, RngStream& stream) {
  detail::check_quadrant_pair(p1, p2);
  const auto [M, B] = separating_window(p1, p2);
  const TruncatedLineSample plus = sample_lines(stream, LineSubclass::plus, M, B);
  const TruncatedLineSample minus = sample_lines(stream, LineSubclass::minus, M, B);
  return connected_given(plus.lines, p1, p2) && connected_given(minus.lines, p1, p2);
}

/// Connectivity read off the two seminal curves through the component-line
/// decomposition: p2 under Gamma_+ and p1 under Gamma_- connect; both above
/// are separated; otherwise the pair connects iff the last tangent line of the
/// curve that the upper point sits above passes over the other point.
/// Both curves are in their own coordinates (Gamma_- mirrored).
inline bool decomposition_indicator(const SeminalCurve& gamma_minus, const SeminalCurve& gamma_plus, Point p1,
                                    Point p2) {
  detail::check_quadrant_pair(p1, p2);
  const double t = -p1.x;
  const double u = p2.x;
  const bool below_minus = p1.y < gamma_minus.value(t);
  const bool below_plus = p2.y < gamma_plus.value(u);
  if (below_minus && below_plus) return true;
  if (!below_minus && !below_plus) return false;

  // Curve whose graph lies under `upper`; `other` sits under the opposite curve.
  const SeminalCurve& curve = below_plus ? gamma_minus : gamma_plus;
  const double own_s = below_plus ? t : u;
  const double own_y = below_plus ? p1.y : p2.y;
  const double other_s = below_plus ? u : t;
  const double other_y = below_plus ? p2.y : p1.y;

  std::optional<std::size_t> last_below;
  for (const CurveVertex& v : curve.vertices()) {
    if (v.line_at(own_s) < own_y) last_below = v.n;
  }
  const CurveVertex& v = curve.vertex(*last_below);
  return v.Y - v.sigma * other_s > other_y;
}

struct BoxVolumeParams {
  double H = 3.0;
  std::size_t n_mc = 100'000;
  std::size_t grid = 200;
  // Slope window M = H / margin for sampled realizations; half a grid cell by default.
  std::optional<double> margin;
};

struct BoxVolume {
  double mc = 0.0;
  double mc_se = 0.0;
  double quad = 0.0;
  double quad_error_bound = 0.0;
  std::size_t line_count = 0;
};

namespace detail {

// Area of a polygon given as a vertex ring.
inline double polygon_area(const std::vector<Point>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * std::abs(twice);
}

// Keeps the part of a convex polygon with y <= line(x) (Sutherland-Hodgman, one edge).
inline std::vector<Point> clip_below(const std::vector<Point>& poly, const Line& line) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    const double da = a.y - line.height(a.x);
    const double db = b.y - line.height(b.x);
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double w = da / (da - db);
      out.push_back({a.x + w * (b.x - a.x), a.y + w * (b.y - a.y)});
    }
  }
  return out;
}

// Integral over y in (0, H) and t in (0, 1) of min(y / t, T).
inline double wedge_slope_mass(double H, double T) {
  if (T <= 0.0) return 0.0;
  if (H <= T) return 0.5 * H * H * (1.5 + std::log(T / H));
  return 0.75 * T * T + T * (H - T);
}

}  // namespace detail

/// Exact y2-integral of the valid-p1 area for the column x2 = u: sweeping y2
/// upward, each line with b > 0 that drops below p2 clips the valid region of
/// p1 to the half-plane under it. Lines with b <= 0 never separate a pair from
/// Q- x Q+ (the origin lies above them, and they cannot pass over both points).
inline double column_volume(const std::vector<Line>& lines, double u, double H) {
  struct Event {
    double threshold;
    const Line* line;
  };
  std::vector<Event> events;
  for (const Line& l : lines) {
    if (l.b > 0.0 && l.height(u) < H) events.push_back({l.height(u), &l});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.threshold < b.threshold; });

  std::vector<Point> poly = {{-1.0, 0.0}, {0.0, 0.0}, {0.0, H}, {-1.0, H}};
  double area = H;
  double y = 0.0;
  double total = 0.0;
  for (const Event& e : events) {
    const double at = std::max(e.threshold, 0.0);
    total += area * (at - y);
    y = at;
    poly = detail::clip_below(poly, *e.line);
    area = poly.size() >= 3 ? detail::polygon_area(poly) : 0.0;
    if (area == 0.0) return total;
  }
  return total + area * (H - y);
}

/// 4-volume of {(p1, p2) in (Q- x Q+) within height H : connected} for one
/// fixed realization, computed twice: by uniform point-pair Monte Carlo and
/// by midpoint quadrature over x2 of the exact column volumes. The quadrature
/// bound uses |dI/du| <= H^2/u + wedge term for negative slopes, and the
/// trivial bound h H^2 on the first cell.
inline BoxVolume box_volume_two_ways(const std::vector<Line>& lines, RngStream& stream, const BoxVolumeParams& params) {
  const double H = params.H;
  if (!(H > 0.0) || params.grid == 0 || params.n_mc < 2) {
    throw InvalidParameter("box_volume_two_ways: need H > 0, grid >= 1, n_mc >= 2");
  }
  BoxVolume out;
  out.line_count = lines.size();

  // Lines most likely to separate come first, so the scan stops early.
  std::vector<Line> sorted = lines;
  std::sort(sorted.begin(), sorted.end(), [](const Line& a, const Line& b) { return a.b < b.b; });
  std::size_t hits = 0;
  for (std::size_t i = 0; i < params.n_mc; ++i) {
    const Point p1{-stream.uniform01(), H * stream.uniform01()};
    const Point p2{stream.uniform01(), H * stream.uniform01()};
    if (connected_given(sorted, p1, p2)) ++hits;
  }
  const double n = static_cast<double>(params.n_mc);
  const double p = static_cast<double>(hits) / n;
  out.mc = H * H * p;
  out.mc_se = H * H * std::sqrt(p * (1.0 - p) / (n - 1.0));

  const double h = 1.0 / static_cast<double>(params.grid);
  double sum = 0.0;
  for (std::size_t j = 0; j < params.grid; ++j) {
    sum += column_volume(lines, (static_cast<double>(j) + 0.5) * h, H);
  }
  out.quad = sum / static_cast<double>(params.grid);

  double steepest_negative = 0.0;
  for (const Line& l : lines) {
    if (l.b > 0.0 && l.sigma < 0.0) steepest_negative = std::max(steepest_negative, -l.sigma);
  }
  const double wedge = detail::wedge_slope_mass(H, steepest_negative);
  double bound = h * H * H;
  for (std::size_t j = 1; j < params.grid; ++j) {
    const double lipschitz = H * H / (static_cast<double>(j) * h) + wedge;
    bound += lipschitz * h * h / 4.0;
  }
  out.quad_error_bound = bound;
  return out;
}

/// Plus and minus lines windowed for a box of height H: M = H / margin, B = H.
/// Exact for every query point with |x| >= margin.
inline std::vector<Line> sample_box_realization(RngStream& stream, const BoxVolumeParams& params) {
  const double margin = params.margin.value_or(params.grid > 0 ? 0.5 / static_cast<double>(params.grid) : 0.0);
  if (!(margin > 0.0)) {
    throw InvalidParameter("box_volume_two_ways: grid margin must be positive");
  }
  const double M = params.H / margin;
  std::vector<Line> lines = sample_lines(stream, LineSubclass::plus, M, params.H).lines;
  const std::vector<Line> minus = sample_lines(stream, LineSubclass::minus, M, params.H).lines;
  lines.insert(lines.end(), minus.begin(), minus.end());
  return lines;
}

/// Same, on a fresh realization from sample_box_realization.
inline BoxVolume box_volume_two_ways(RngStream& stream, const BoxVolumeParams& params) {
  RngStream line_stream = stream.fork(1);
  RngStream point_stream = stream.fork(2);
  const std::vector<Line> lines = sample_box_realization(line_stream, params);
  return box_volume_two_ways(lines, point_stream, params);
}

}  // namespace pcity
