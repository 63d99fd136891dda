#include <gtest/gtest.h>

#include "poslr/infinite_horizon.hpp"
#include "poslr/reference_problems.hpp"
#include "test_util.hpp"

using namespace poslr;

TEST(ValueIteration, UndetectableProblem) {
  const auto vi = value_iteration(undetectable_problem());
  ASSERT_TRUE(vi.converged());
  EXPECT_NEAR((vi.p - Eigen::Vector3d(1, 1, 0)).lpNorm<Eigen::Infinity>(), 0, 1e-10);
  EXPECT_LE(vi.residual, 1e-10);
}

TEST(ValueIteration, ScalarFixedPoint) {
  const auto vi = value_iteration(scalar_problem());
  ASSERT_TRUE(vi.converged());
  EXPECT_NEAR(vi.p(0), 1, 1e-10);
  EXPECT_DOUBLE_EQ(vi.h, 3.0);  // A − |B|E = −2
}

TEST(ValueIteration, ZeroCostStopsImmediately) {
  Problem spec = nonunique_gain_problem(Horizon<double>::infinite());
  spec.s.setZero();
  const auto vi = value_iteration(spec);
  ASSERT_TRUE(vi.converged());
  EXPECT_EQ(vi.iterations, 1);
  EXPECT_EQ(vi.p, Eigen::VectorXd::Zero(3));
}

TEST(ValueIteration, UncontrolledUnstableDiverges) {
  Problem spec;
  spec.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.B = Eigen::MatrixXd::Zero(1, 1);
  spec.E = Eigen::MatrixXd::Ones(1, 1);
  spec.s = Eigen::VectorXd::Ones(1);
  spec.r = Eigen::VectorXd::Zero(1);
  spec.normalize_empty_blocks();
  const auto vi = value_iteration(spec);
  EXPECT_EQ(vi.status, IterationStatus::Diverged);
}

TEST(ValueIteration, IterationCap) {
  ValueIterationOptions options;
  options.max_iterations = 3;
  const auto vi = value_iteration(scalar_problem(), options);
  EXPECT_EQ(vi.status, IterationStatus::IterCap);
  EXPECT_EQ(vi.iterations, 3);
}

TEST(ValueIteration, IteratesAreMonotone) {
  ValueIterationOptions options;
  options.record_trace = true;
  for (const Problem& spec : poslr::testing::stabilizable_suite(99, 10)) {
    const auto vi = value_iteration(spec, options);
    ASSERT_TRUE(vi.converged());
    ASSERT_FALSE(vi.trace.empty());
    for (std::size_t k = 1; k < vi.trace.size(); ++k)
      EXPECT_GE(vi.trace[k].p_norm, vi.trace[k - 1].p_norm - tol::sol);
  }
}

TEST(ValueIteration, RejectsInadmissibleRate) {
  ValueIterationOptions options;
  options.h = 0.5;  // A − |B|E has diagonal −2
  EXPECT_THROW(value_iteration(scalar_problem(), options), InvalidArgument);
  EXPECT_FALSE(rate_is_admissible(scalar_problem(), 0.0));
  EXPECT_TRUE(rate_is_admissible(scalar_problem(), 2.0));
}

TEST(ValueIteration, ConvergedResidualBound) {
  for (const Problem& spec : poslr::testing::stabilizable_suite(5, 10)) {
    const auto vi = value_iteration(spec);
    ASSERT_TRUE(vi.converged());
    const double norm = vi.p.lpNorm<Eigen::Infinity>();
    EXPECT_LE(vi.residual, tol::fixed_point * (1 + norm) * (vi.h + 1));
  }
}

TEST(BellmanResidual, KnownPoints) {
  EXPECT_LE(bellman_residual(undetectable_problem(), Eigen::VectorXd(Eigen::Vector3d(1, 1, 0))),
            1e-12);
  const Problem spec = nonunique_gain_problem(Horizon<double>::infinite());
  EXPECT_DOUBLE_EQ(bellman_residual(spec, Eigen::VectorXd(Eigen::VectorXd::Zero(3))), 1.0);
  EXPECT_EQ(bellman_residual(scalar_problem(), Eigen::VectorXd(Eigen::VectorXd::Ones(1))), 0.0);
  EXPECT_THROW(bellman_residual(spec, Eigen::VectorXd(Eigen::VectorXd::Zero(2))), DimensionMismatch);
}

TEST(GammaCheck, InfiniteHorizon) {
  Problem spec = scalar_problem();
  EXPECT_TRUE(check_gamma_infinite(spec, Eigen::VectorXd(Eigen::VectorXd::Ones(1))).ok);
  spec.F = Eigen::MatrixXd::Ones(1, 1);
  spec.gamma = Eigen::VectorXd::Constant(1, 2.0);
  const auto check = check_gamma_infinite(spec, value_iteration(spec).p);
  EXPECT_TRUE(check.ok);
  EXPECT_NEAR(check.margin(0), 1, 1e-10);
  spec.gamma(0) = 0.5;
  EXPECT_FALSE(check_gamma_infinite(spec, value_iteration(spec).p).ok);
}

TEST(StaticGain, UndetectableProblemTie) {
  const Problem spec = undetectable_problem();
  const auto gain = extract_static_gain(spec, Eigen::VectorXd(Eigen::Vector3d(1, 1, 0)));
  EXPECT_TRUE(gain.pattern.tie(0));
  EXPECT_EQ(gain.K, spec.E);
}

TEST(StaticGain, ScalarAndUnactuated) {
  EXPECT_EQ(extract_static_gain(scalar_problem(), Eigen::VectorXd(Eigen::VectorXd::Ones(1))).K,
            Eigen::MatrixXd::Ones(1, 1));
  Problem spec = scalar_problem();
  spec.B.setZero();
  spec.r(0) = 1;
  const auto gain = extract_static_gain(spec, Eigen::VectorXd(Eigen::VectorXd::Ones(1)));
  EXPECT_EQ(gain.pattern.sign(0), 1);
  EXPECT_FALSE(gain.pattern.tie(0));
}

TEST(RateInvariance, UndetectableProblem) {
  EXPECT_LE(h_invariance_check(undetectable_problem(), 5.0, 50.0), 1e-8);
}

TEST(RateInvariance, Scalar) {
  EXPECT_LE(h_invariance_check(scalar_problem(), 3.0, 30.0), 1e-8);
}

TEST(RateInvariance, ZeroCost) {
  Problem spec = scalar_problem();
  spec.s.setZero();
  EXPECT_EQ(h_invariance_check(spec, 3.0, 7.0), 0.0);
}

TEST(RateInvariance, ReportsFailures) {
  Problem spec;
  spec.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.B = Eigen::MatrixXd::Zero(1, 1);
  spec.E = Eigen::MatrixXd::Ones(1, 1);
  spec.s = Eigen::VectorXd::Ones(1);
  spec.r = Eigen::VectorXd::Zero(1);
  spec.normalize_empty_blocks();
  EXPECT_THROW(h_invariance_check(spec, 1.0, 2.0), SolveFailed);
}
