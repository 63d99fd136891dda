#include <gtest/gtest.h>

#include <cmath>

#include "poslr/gain.hpp"
#include "poslr/reference_problems.hpp"
#include "poslr/water_network.hpp"

using namespace poslr;

TEST(L1Gain, NoRainChannels) {
  const L1GainReport report = min_l1_gain(scalar_problem());
  EXPECT_EQ(report.gamma_star.size(), 0);
  EXPECT_EQ(report.gamma_star_max, 0.0);
  EXPECT_TRUE(report.admissible);
  EXPECT_FALSE(report.finite_horizon);
}

TEST(L1Gain, ZeroInputMatrix) {
  Problem spec = scalar_problem();
  spec.F = Eigen::MatrixXd::Zero(1, 2);
  spec.gamma = Eigen::VectorXd::Zero(2);
  const L1GainReport report = min_l1_gain(spec);
  EXPECT_EQ(report.gamma_star, Eigen::VectorXd::Zero(2));
  EXPECT_TRUE(report.admissible);
}

TEST(L1Gain, ScalarInfiniteHorizon) {
  Problem spec = scalar_problem();
  spec.F = Eigen::MatrixXd::Ones(1, 1);
  spec.gamma = Eigen::VectorXd::Constant(1, 1.5);
  const L1GainReport report = min_l1_gain(spec);
  EXPECT_NEAR(report.gamma_star(0), 1, 1e-10);
  EXPECT_NEAR(report.gamma_star_max, 1, 1e-10);
  EXPECT_TRUE(report.admissible);
  EXPECT_NEAR(report.margin(0), 0.5, 1e-10);
  EXPECT_TRUE(report.l1_interpretation);

  spec.gamma(0) = 0.9;
  EXPECT_FALSE(min_l1_gain(spec).admissible);
}

TEST(L1Gain, ScalarFiniteHorizon) {
  Problem spec = scalar_problem(Horizon<double>::finite(0.5));
  spec.F = Eigen::MatrixXd::Constant(1, 1, 2.0);
  spec.gamma = Eigen::VectorXd::Constant(1, 2.0);
  const L1GainReport report = min_l1_gain(spec, 2000);
  EXPECT_TRUE(report.finite_horizon);
  EXPECT_NEAR(report.gamma_star(0), 2 * (1 - std::exp(-1.0)), 1e-9);
}

TEST(L1Gain, FromValue) {
  Problem spec = scalar_problem();
  spec.F = Eigen::MatrixXd{{1, 3}};
  spec.gamma = Eigen::Vector2d(4, 4);
  const L1GainReport report = l1_gain_from_value(spec, Eigen::VectorXd::Constant(1, 1.25));
  EXPECT_EQ(report.gamma_star, Eigen::Vector2d(1.25, 3.75));
  EXPECT_EQ(report.gamma_star_max, 3.75);
  EXPECT_NEAR(report.margin(1), 0.25, 1e-15);
}

TEST(L1Gain, DivergenceThrows) {
  Problem spec;
  spec.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.B = Eigen::MatrixXd::Zero(1, 1);
  spec.E = Eigen::MatrixXd::Ones(1, 1);
  spec.s = Eigen::VectorXd::Ones(1);
  spec.r = Eigen::VectorXd::Zero(1);
  spec.normalize_empty_blocks();
  EXPECT_THROW(min_l1_gain(spec), SolveFailed);
}

TEST(L1Gain, WaterNetworkDisturbanceBreaksL1Reading) {
  WaterParams params = WaterParams::defaults(10);
  params.rain = true;
  params.gamma = 100;
  const Problem spec = build_water_spec(params, Horizon<double>::finite(24));
  const L1GainReport report = min_l1_gain(spec, 4800);
  EXPECT_FALSE(report.l1_interpretation);
  EXPECT_GT(report.gamma_star_max, 0);
  EXPECT_TRUE(report.admissible);
}

TEST(L1Gain, ThresholdLeavesValueUnchanged) {
  WaterParams params = WaterParams::defaults(20);
  const Problem dry = build_water_spec(params, Horizon<double>::finite(24));
  const auto dry_traj = solve_hjb_ode(dry);

  params.rain = true;
  Problem wet = build_water_spec(params, Horizon<double>::finite(24));
  const L1GainReport report = min_l1_gain(wet);
  wet.gamma = report.gamma_star;
  const auto wet_traj = solve_hjb_ode(wet);
  EXPECT_TRUE(check_gamma_finite(wet, wet_traj).ok);
  EXPECT_LE((wet_traj.values - dry_traj.values).cwiseAbs().maxCoeff(), 1e-9);
}
