#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pcity/curve.hpp"
#include "pcity/regions.hpp"
#include "support.hpp"

using namespace pcity;

namespace {

CurveVertex vertex(double S, double Y, double sigma) {
  CurveVertex v;
  v.S = S;
  v.Y = Y;
  v.sigma = sigma;
  return v;
}

// Reference integrand min(Gamma(t), (Y - sigma t)_+) on the represented range.
double min_integrand(const SeminalCurve& c, const TangentLine& l, double t) {
  return std::min(curve_value(c, t), std::max(0.0, l.mirrored_height(t)));
}

}  // namespace

TEST(DeltaArea, HandArithmetic) {
  EXPECT_DOUBLE_EQ(delta_area(vertex(1.0, 2.0, 1.0), vertex(0.5, 1.0, 3.0)), 0.25);
  EXPECT_EQ(delta_area(vertex(1.0, 2.0, 1.0), vertex(0.5, 1.0, 1.0)), 0.0);
  EXPECT_EQ(delta_area(vertex(1.0, 2.0, 1.0), vertex(1.0, 1.0, 3.0)), 0.0);
}

TEST(DeltaTildeArea, HandArithmetic) {
  EXPECT_DOUBLE_EQ(delta_tilde_area(vertex(1.0, 2.0, 1.0)), 2.0);
  EXPECT_DOUBLE_EQ(delta_tilde_area(vertex(1.0, 1.0, 2.0)), 0.25);
  EXPECT_NEAR(delta_tilde_area(vertex(1.0, 1e-12, 2.0)), 0.0, 1e-20);
}

TEST(IntegralMinLinear, CrossingInsideSegment) {
  const SeminalCurve c = SeminalCurve::from_vertices({vertex(1.0, 1.0, 1.0)}, Orientation::right, 0.25);
  const TangentLine l{2.0, 1.0};
  const double oracle = fixture::integrate([](double t) { return std::min(1.0 + t, 2.0 - t); }, 0.25, 0.5) +
                        fixture::integrate([](double t) { return std::min(1.0 + t, 2.0 - t); }, 0.5, 1.0);
  // 0.34375 on [0.25, 0.5] plus 0.625 on [0.5, 1].
  EXPECT_NEAR(oracle, 0.96875, 1e-14);
  EXPECT_DOUBLE_EQ(integral_min_linear(c, l, 0.25, 1.0), 0.96875);
}

TEST(IntegralMinLinear, LineEntirelyAboveOrBelow) {
  const SeminalCurve c = SeminalCurve::from_vertices({vertex(1.0, 1.0, 1.0)}, Orientation::right, 0.25);
  // 1 + t on [0.25, 1] integrates to 1.21875; 0.5 - 0.1 t to 0.328125.
  EXPECT_DOUBLE_EQ(integral_min_linear(c, {10.0, 0.5}, 0.25, 1.0), 1.21875);
  EXPECT_DOUBLE_EQ(integral_min_linear(c, {0.5, 0.1}, 0.25, 1.0), 0.328125);
  EXPECT_THROW(integral_min_linear(c, {0.5, 0.1}, 0.1, 1.0), OutOfRange);
}

TEST(IntegralMinLinear, AgreesWithDenseRiemannSums) {
  RngStream pick(201, 0);
  for (std::size_t i = 0; i < 40; ++i) {
    CurveSource src = CurveSource::draw(RngStream(201, i + 1), Orientation::right);
    src.extend_until(stop_at_depth(6));
    const SeminalCurve& c = src.curve;
    const double tail = c.tail_s();
    const TangentLine l{0.2 + 3.0 * pick.uniform01(), 0.2 + 5.0 * pick.uniform01()};
    const double a = tail + (1.0 - tail) * 0.3 * pick.uniform01();
    const double b = a + (1.0 - a) * (0.5 + 0.5 * pick.uniform01());
    const double got = integral_min_linear(c, l, a, b);
    const double reference =
        fixture::midpoint_sum([&](double t) { return std::min(curve_value(c, t), l.mirrored_height(t)); }, a, b, 200'000);
    ASSERT_NEAR(got, reference, 1e-7) << "replicate " << i;
  }
}

TEST(CRegionArea, LineAboveCurveReducesToCurveIntegral) {
  const SeminalCurve c = SeminalCurve::from_vertices({vertex(1.0, 1.0, 1.0)}, Orientation::right, 0.5);
  SeminalCurve opposite = c;
  RngStream unused(0, 0);
  const AreaBracket got = c_region_area({10.0, 1.0}, opposite, unused, 10.0);
  const AreaBracket expected = curve_integral_bracket(c);
  EXPECT_DOUBLE_EQ(got.lower, expected.lower);
  EXPECT_DOUBLE_EQ(got.upper, expected.upper);
}

TEST(CRegionArea, ClippedTriangleUnderHighCurve) {
  // Opposite curve far above the line on all of (0, 1].
  SeminalCurve high = SeminalCurve::from_vertices({vertex(1.0, 100.0, 1.0)}, Orientation::left, 1e-9);
  RngStream unused(0, 0);
  // Y / sigma = 0.5: full triangle Y^2 / (2 sigma).
  const AreaBracket a = c_region_area({1.0, 2.0}, high, unused, 1e-6);
  EXPECT_TRUE(a.contains(0.25));
  EXPECT_LT(a.width(), 1e-8);
  // Y / sigma = 3 >= 1: triangle clipped at t = 1.
  const AreaBracket b = c_region_area({3.0, 1.0}, high, unused, 1e-6);
  const double clipped = 0.5 * 9.0 - 0.5 * 4.0;
  EXPECT_NEAR(clipped, 2.5, 1e-15);
  EXPECT_TRUE(b.contains(clipped));
  EXPECT_LT(b.width(), 1e-8);
}

TEST(CRegionArea, PinnedTailCannotReachTolerance) {
  SeminalCurve c = SeminalCurve::from_vertices({vertex(1.0, 1.0, 1.0)}, Orientation::left, 0.5);
  RngStream unused(0, 0);
  EXPECT_THROW(c_region_area({10.0, 1.0}, c, unused, 1e-3), NeedsExtension);
  EXPECT_THROW(c_region_area({10.0, 1.0}, c, unused, 0.0), InvalidParameter);
}

TEST(CRegionArea, ExtendsOppositeCurveUntilBracketFits) {
  for (std::size_t i = 0; i < 50; ++i) {
    CurveSource own = CurveSource::draw(RngStream(202, i), Orientation::right);
    CurveSource opp = CurveSource::draw(RngStream(202, 1000 + i), Orientation::left);
    const TangentLine l = TangentLine::of(own.curve.vertex(0));
    const double tol = 1e-6;
    const AreaBracket a = c_region_area(l, opp.curve, opp.stream, tol);
    ASSERT_LE(a.width(), tol);
    const double tail = opp.curve.tail_s();
    const double support = std::min(1.0, l.axis_crossing());
    const double reference =
        tail < support
            ? fixture::midpoint_sum([&](double t) { return min_integrand(opp.curve, l, t); }, tail, support, 200'000)
            : 0.0;
    ASSERT_NEAR(a.lower, reference, 1e-7);
    ASSERT_GE(a.upper + 1e-12, a.lower);
  }
}
