#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pcity/validation.hpp"

using namespace pcity;

TEST(Kolmogorov, StatisticOnTinySample) {
  EXPECT_DOUBLE_EQ(ks_statistic({0.5}, [](double x) { return x; }), 0.5);
  EXPECT_DOUBLE_EQ(ks_statistic({0.25, 0.75}, [](double x) { return x; }), 0.25);
  EXPECT_THROW(ks_statistic({}, [](double x) { return x; }), InvalidParameter);
}

TEST(Kolmogorov, CriticalValuesMatchTables) {
  // Asymptotic quantiles of the Kolmogorov law: 1.3581 (5%), 1.6276 (1%).
  EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(kolmogorov_survival(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(ks_critical_value(10'000, 0.01), 1.6276 / (100.0 + 0.12 + 0.0011), 1e-6);
  EXPECT_THROW(ks_critical_value(0, 0.01), InvalidParameter);
}

TEST(KsRayleigh, DynamicsAtUnitAbscissa) {
  const TestReport r = ks_rayleigh(RngStream(501, 0), 1.0, 10'000, CurveGenerator::dynamics);
  EXPECT_TRUE(r.passed) << r.statistic << " > " << r.threshold;
  EXPECT_EQ(r.n_samples, 10'000u);
  EXPECT_EQ(r.seed, 501u);
}

TEST(KsRayleigh, EnvelopeAtHalf) {
  const TestReport r = ks_rayleigh(RngStream(502, 0), 0.5, 10'000, CurveGenerator::envelope);
  EXPECT_TRUE(r.passed) << r.statistic << " > " << r.threshold;
}

TEST(KsRayleigh, MisScaledSamplesFail) {
  const TestReport r = ks_rayleigh(RngStream(503, 0), 1.0, 100'000, CurveGenerator::dynamics, 1.1);
  EXPECT_FALSE(r.passed);
  EXPECT_THROW(ks_rayleigh(RngStream(503, 0), 1.0, 999, CurveGenerator::dynamics), InvalidParameter);
  EXPECT_THROW(ks_rayleigh(RngStream(503, 0), 1.5, 1000, CurveGenerator::dynamics), InvalidParameter);
}

TEST(KsSlopeMark, UniformForBothGenerators) {
  for (CurveGenerator g : {CurveGenerator::dynamics, CurveGenerator::envelope}) {
    const TestReport r = ks_slope_mark(RngStream(504, 0), 0.5, 10'000, g);
    EXPECT_TRUE(r.passed) << r.name << ": " << r.statistic;
  }
}

TEST(MartingaleCheck, ConstantMeanAndPowerAgainstWrongFactor) {
  EXPECT_TRUE(martingale_check(RngStream(505, 0), 5, 100'000).passed);
  EXPECT_FALSE(martingale_check(RngStream(505, 0), 1, 100'000, 2.0).passed);
  EXPECT_THROW(martingale_check(RngStream(505, 0), 16, 10), InvalidParameter);
}

TEST(MartingaleCheck, SquaredUniformSamplerIsDetected) {
  EXPECT_FALSE(martingale_check(RngStream(506, 0), 5, 100'000, 3.0, true).passed);
}

TEST(DecayCheck, BoundHoldsAndFasterRateFails) {
  EXPECT_TRUE(decay_check(RngStream(507, 0), 0, 10'000).passed);
  EXPECT_TRUE(decay_check(RngStream(507, 0), 8, 100'000).passed);
  EXPECT_FALSE(decay_check(RngStream(507, 0), 8, 100'000, 4.0).passed);
}

TEST(MomentUnitChecks, AllSixIdentities) {
  const auto reports = moment_unit_checks(RngStream(508, 0));
  ASSERT_EQ(reports.size(), 12u);
  for (const TestReport& r : reports) EXPECT_TRUE(r.passed) << r.name << ": " << r.statistic << " > " << r.threshold;
}

TEST(MomentUnitChecks, SquaredUniformSamplerIsDetected) {
  const auto reports = moment_unit_checks(RngStream(508, 0), 1'000'000, true);
  EXPECT_FALSE(reports.at(0).passed);
  EXPECT_EQ(reports.at(0).name, "moment_unit_checks/E[1-sqrtU]/empirical");
}

TEST(MeanFlowExperiment, ShallowDepthWideInterval) {
  const auto reports = mean_flow_experiment(RngStream(509, 0), 0, 1e-4, 10'000);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_TRUE(reports[0].passed);
  EXPECT_TRUE(reports[1].passed) << reports[1].statistic << " > " << reports[1].threshold;
}

TEST(TruncationCheck, DepthFiveAgainstTwentyFive) {
  EXPECT_TRUE(truncation_check(RngStream(510, 0), 5, 25, 1e-4, 2'000).passed);
}

TEST(PathwiseIdentity, HoldsToMachinePrecision) {
  const TestReport r = pathwise_identity_check(RngStream(511, 0), 15, 10'000);
  EXPECT_TRUE(r.passed) << r.statistic;
}

TEST(TestReports, PassedMeansStatisticWithinThresholdAndReproducible) {
  BatteryConfig c;
  c.seed = 512;
  c.ks_samples = 1000;
  c.martingale_reps = 2000;
  c.decay_reps = 2000;
  c.moment_samples = 20'000;
  c.flow_reps = 500;
  c.truncation_reps = 200;
  c.box_realizations = 2;
  c.box.n_mc = 5000;
  c.cross_realizations = 5;
  c.cross_pairs = 200;
  const auto a = run_validation_battery(c);
  const auto b = run_validation_battery(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].passed, a[i].statistic <= a[i].threshold) << a[i].name;
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].statistic, b[i].statistic) << a[i].name;
    EXPECT_EQ(a[i].seed, 512u);
  }
  c.threads = 3;
  const auto threaded = run_validation_battery(c);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].statistic, threaded[i].statistic) << a[i].name;
}
