#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcity/estimator.hpp"
#include "support.hpp"

using namespace pcity;

namespace {

double dense_integral(const SeminalCurve& c) {
  return fixture::midpoint_sum([&](double s) { return curve_value(c, s); }, c.tail_s(), 1.0, 200'000);
}

// |C| for the tangent line of `v` against `opp`, by dense midpoint sums.
double dense_c(const CurveVertex& v, const SeminalCurve& opp) {
  const double support = std::min(1.0, v.Y / v.sigma);
  if (opp.tail_s() >= support) return 0.0;
  return fixture::midpoint_sum(
      [&](double t) { return std::min(curve_value(opp, t), std::max(0.0, v.Y - v.sigma * t)); }, opp.tail_s(),
      support, 200'000);
}

double dense_delta(const CurveVertex& v, const CurveVertex& w) {
  return 0.5 * (1.0 - w.S) * (1.0 - w.S) * (w.sigma - v.sigma);
}

}  // namespace

TEST(L1ErrorBound, Arithmetic) {
  EXPECT_NEAR(l1_error_bound(0), 20.0 / 7.0 + 20.0 / 27.0, 1e-15);
  EXPECT_NEAR(l1_error_bound(0), 3.59788, 1e-5);
  EXPECT_NEAR(l1_error_bound(1), 20.0 / 21.0 + 20.0 / 162.0, 1e-15);
  EXPECT_NEAR(l1_error_bound(1), 1.07584, 1e-5);
  EXPECT_NEAR(l1_error_bound(5), 0.01186, 1e-5);
  for (std::size_t n = 0; n < 40; ++n) EXPECT_LT(l1_error_bound(n + 1), l1_error_bound(n) / 3.0);
}

TEST(EstimateHalfPlane, MatchesIndependentAssembly) {
  for (std::size_t N : {0u, 3u}) {
    for (std::size_t i = 0; i < 10; ++i) {
      auto [minus, plus] = draw_curve_pair(RngStream(301, i));
      const FlowEstimate e = estimate_half_plane(minus, plus, N, 1e-4);
      // Rebuild every term from the (now extended) vertex lists.
      double expected = dense_integral(minus.curve) * dense_integral(plus.curve);
      for (std::size_t n = 0; n <= N; ++n) {
        expected += dense_c(plus.curve.vertex(n), minus.curve) * dense_delta(plus.curve.vertex(n), plus.curve.vertex(n + 1));
        expected += dense_c(minus.curve.vertex(n), plus.curve) * dense_delta(minus.curve.vertex(n), minus.curve.vertex(n + 1));
      }
      // Terms cut off by the tails are bounded by the bracket width.
      EXPECT_NEAR(e.value, expected, e.bracket_width + 1e-6) << "N=" << N << " i=" << i;
      EXPECT_EQ(e.plus_terms.size(), N + 1);
      EXPECT_EQ(e.minus_terms.size(), N + 1);
    }
  }
}

TEST(EstimateHalfPlane, BracketBudgetAndOrdering) {
  for (std::size_t i = 0; i < 500; ++i) {
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      auto [minus, plus] = draw_curve_pair(RngStream(302, i));
      const FlowEstimate e = estimate_half_plane(minus, plus, 10, eps);
      ASSERT_LE(e.bracket_width, 1.5 * eps);
      ASSERT_LE(e.product_bracket.width(), 0.5 * eps * (1.0 + 1e-12));
      ASSERT_LE(e.lower, e.value);
      ASSERT_LE(e.value, e.upper);
      ASSERT_GE(e.lower, curve_integral_bracket(minus.curve).lower * curve_integral_bracket(plus.curve).lower);
      ASSERT_EQ(e.l1_bound, l1_error_bound(10));
    }
  }
}

TEST(EstimateHalfPlane, DeeperTruncationOnlyAdds) {
  for (std::size_t i = 0; i < 200; ++i) {
    auto [minus, plus] = draw_curve_pair(RngStream(303, i));
    auto minus2 = minus;
    auto plus2 = plus;
    const double eps = 1e-5;
    const FlowEstimate shallow = estimate_half_plane(minus, plus, 4, eps);
    const FlowEstimate deep = estimate_half_plane(minus2, plus2, 9, eps);
    ASSERT_GE(deep.value, shallow.value - 3.0 * eps);
    for (std::size_t n = 0; n <= 4; ++n) {
      ASSERT_NEAR(deep.plus_terms[n], shallow.plus_terms[n], eps);
      ASSERT_NEAR(deep.minus_terms[n], shallow.minus_terms[n], eps);
    }
  }
}

TEST(EstimateHalfPlane, RejectsNonPositiveBudget) {
  auto [minus, plus] = draw_curve_pair(RngStream(304, 0));
  EXPECT_THROW(estimate_half_plane(minus, plus, 2, 0.0), InvalidParameter);
}

TEST(SampleTotalFlow, IsAverageOfTwoIndependentHalves) {
  const TotalFlowParts p = sample_total_flow_parts(RngStream(305, 0), 8, 1e-4);
  EXPECT_DOUBLE_EQ(p.total.value, 0.5 * (p.upper.value + p.lower.value));
  EXPECT_DOUBLE_EQ(p.total.product_term, 0.5 * (p.upper.product_term + p.lower.product_term));
  EXPECT_NE(p.upper.value, p.lower.value);
  const FlowEstimate again = sample_total_flow(RngStream(305, 0), 8, 1e-4);
  EXPECT_EQ(again.value, p.total.value);
}

TEST(SampleTotalFlow, HalvesUncorrelated) {
  const std::size_t n = 100'000;
  RunningStats a, b;
  double cross = 0.0;
  std::vector<std::pair<double, double>> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TotalFlowParts p = sample_total_flow_parts(RngStream(306, i), 5, 1e-3);
    xs[i] = {p.upper.value, p.lower.value};
    a.push(p.upper.value);
    b.push(p.lower.value);
  }
  for (const auto& [u, l] : xs) cross += (u - a.mean()) * (l - b.mean());
  const double corr = cross / static_cast<double>(n - 1) / std::sqrt(a.variance() * b.variance());
  EXPECT_NEAR(corr, 0.0, 0.01);
}

TEST(SampleTotalFlow, ProductTermMeanIsSquaredRayleighIntegral) {
  const std::size_t n = 40'000;
  RunningStats st;
  for (std::size_t i = 0; i < n; ++i) st.push(sample_total_flow(RngStream(307, i), 2, 1e-4).product_term);
  const double root = fixture::integrate([](double s) { return std::sqrt(std::numbers::pi * s); }, 0.0, 1.0);
  EXPECT_NEAR(root * root, 4.0 * std::numbers::pi / 9.0, 1e-10);
  EXPECT_NEAR(st.mean(), root * root, 3.0 * st.standard_error() + 1e-4);
}

TEST(SampleTotalFlow, ShallowTruncationWithinWideBand) {
  // At N = 0 only the truncation bound l1_error_bound(0) ~ 3.6 constrains the mean.
  const std::size_t n = 20'000;
  RunningStats st;
  for (std::size_t i = 0; i < n; ++i) st.push(sample_total_flow(RngStream(308, i), 0, 1e-4).value);
  EXPECT_LE(std::abs(st.mean() - 2.0), 3.0 * st.standard_error() + 1e-4 + l1_error_bound(0));
}
