#include <gtest/gtest.h>

#include <random>

#include "poslr/infinite_horizon.hpp"
#include "poslr/reference_problems.hpp"
#include "poslr/stability.hpp"
#include "test_util.hpp"

using namespace poslr;

TEST(Detectability, UndetectableOpenLoop) {
  const Problem spec = undetectable_problem();
  const auto result = detectability_check(Eigen::MatrixXd(spec.s.transpose()), spec.A);
  EXPECT_FALSE(result.detectable);
  EXPECT_FALSE(result.marginal);
  ASSERT_EQ(result.witnesses.size(), 1u);
  EXPECT_NEAR(result.witnesses[0].lambda, 1, 1e-9);
  EXPECT_NEAR((result.witnesses[0].v - Eigen::Vector3d(0, 0, 1)).lpNorm<Eigen::Infinity>(), 0,
              1e-9);
}

TEST(Detectability, PositiveOutputSeesEverything) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd M = poslr::testing::random_metzler(rng, 2 + trial % 6);
    const Eigen::MatrixXd C = Eigen::MatrixXd::Constant(1, M.cols(), 0.5);
    EXPECT_TRUE(detectability_check(C, M).detectable);
  }
}

TEST(Detectability, HurwitzIsVacuouslyDetectable) {
  const Eigen::MatrixXd M{{-2, 1}, {1, -2}};
  EXPECT_TRUE(detectability_check(Eigen::MatrixXd::Zero(1, 2), M).detectable);
  EXPECT_TRUE(detectability_check(Eigen::MatrixXd(0, 2), M).detectable);
}

TEST(Detectability, MarginalWitness) {
  const Eigen::MatrixXd M = Eigen::Vector2d(-1, 0).asDiagonal();
  const auto result = detectability_check(Eigen::MatrixXd{{1, 0}}, M);
  EXPECT_FALSE(result.detectable);
  EXPECT_TRUE(result.marginal);
}

TEST(Detectability, SeveralOutputRows) {
  const Eigen::MatrixXd M = Eigen::Vector2d(1, 1).asDiagonal();
  EXPECT_FALSE(detectability_check(Eigen::MatrixXd{{1, 0}}, M).detectable);
  EXPECT_TRUE(detectability_check(Eigen::MatrixXd{{1, 0}, {0, 1}}, M).detectable);
}

TEST(Detectability, RejectsBadInput) {
  EXPECT_THROW(detectability_check(Eigen::MatrixXd{{-1}}, Eigen::MatrixXd{{1}}), NegativeEntry);
  EXPECT_THROW(detectability_check(Eigen::MatrixXd{{1, 1}}, Eigen::MatrixXd{{1}}),
               DimensionMismatch);
}

// Independent oracle: largest unobserved set closed under the dynamics.
TEST(Detectability, MatchesClosedSetOracle) {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> coin(0, 2);
  int undetectable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 2 + trial % 7;
    const Eigen::MatrixXd M = poslr::testing::random_metzler(rng, n, 0.25);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(1 + trial % 2, n);
    for (Index i = 0; i < C.rows(); ++i)
      for (Index j = 0; j < n; ++j) C(i, j) = coin(rng) == 0 ? 1 : 0;
    const bool oracle = poslr::testing::detectable_by_closed_set(C, M);
    undetectable += !oracle;
    EXPECT_EQ(detectability_check(C, M).detectable, oracle) << "trial " << trial << "\n" << M
                                                            << "\nC\n" << C;
  }
  EXPECT_GT(undetectable, 20);
}

TEST(Certificate, NonuniqueGainK1) {
  const Problem spec = nonunique_gain_problem(Horizon<double>::infinite());
  const auto cert = closed_loop_certificate(spec, spec.E, Eigen::VectorXd(Eigen::Vector3d(1, 1, 1)));
  EXPECT_TRUE(cert.hurwitz);
  EXPECT_TRUE(cert.detectability.detectable);
  EXPECT_EQ(cert.output_row, Eigen::VectorXd::Ones(3));
  EXPECT_TRUE(cert.bellman_solved);
  EXPECT_FALSE(cert.contradiction);
  ASSERT_TRUE(cert.positive_vector.has_value());
}

TEST(Certificate, UndetectableProblemIsConsistent) {
  const Problem spec = undetectable_problem();
  const auto cert = closed_loop_certificate(spec, spec.E, Eigen::VectorXd(Eigen::Vector3d(1, 1, 0)));
  EXPECT_EQ(cert.output_row, spec.s);
  EXPECT_FALSE(cert.detectability.detectable);
  EXPECT_FALSE(cert.hurwitz);
  EXPECT_NEAR(cert.abscissa, 1, 1e-9);
  EXPECT_TRUE(cert.bellman_solved);
  EXPECT_FALSE(cert.contradiction);
}

TEST(Certificate, WrongGainIsNotMinimizing) {
  const Problem spec = scalar_problem();
  const auto cert = closed_loop_certificate(spec, Eigen::MatrixXd::Zero(1, 1),
                                            Eigen::VectorXd(Eigen::VectorXd::Ones(1)));
  EXPECT_FALSE(cert.bellman_solved);
  EXPECT_TRUE(cert.hurwitz);
}

TEST(Certificate, CorollaryPathOnRandomGains) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> sign(-1, 1);
  for (const Problem& spec : poslr::testing::stabilizable_suite(123, 10)) {
    Problem zero_r = spec;
    zero_r.r.setZero();
    ASSERT_TRUE(corollary_detectability(zero_r));
    Eigen::VectorXi d(spec.controls());
    for (Index i = 0; i < d.size(); ++i) d(i) = sign(rng);
    const Eigen::MatrixXd K = d.cast<double>().asDiagonal() * spec.E;
    EXPECT_TRUE(closed_loop_certificate(zero_r, K).detectability.detectable);
  }
}

TEST(Certificate, BellmanSolvedDetectableGainsAreHurwitz) {
  for (const Problem& spec : poslr::testing::stabilizable_suite(456, 15)) {
    const auto vi = value_iteration(spec);
    ASSERT_TRUE(vi.converged());
    const auto gain = extract_static_gain(spec, vi.p);
    const auto cert = closed_loop_certificate(spec, gain.K, vi.p);
    EXPECT_TRUE(cert.bellman_solved);
    EXPECT_FALSE(cert.contradiction);
    if (cert.detectability.detectable) EXPECT_TRUE(cert.hurwitz);
  }
}

TEST(Certificate, RejectsOversizedGain) {
  const Problem spec = scalar_problem();
  EXPECT_THROW(closed_loop_certificate(spec, Eigen::MatrixXd::Constant(1, 1, 2.0)),
               InvalidArgument);
  EXPECT_THROW(closed_loop_certificate(spec, Eigen::MatrixXd::Ones(1, 2)), DimensionMismatch);
}

TEST(Certificate, RejectsNonMetzlerClosedLoop) {
  Problem spec;
  spec.A = Eigen::MatrixXd{{-1, 0}, {0, -1}};
  spec.B = Eigen::MatrixXd{{1}, {0}};
  spec.E = Eigen::MatrixXd{{0, 1}};
  spec.s = Eigen::VectorXd::Ones(2);
  spec.r = Eigen::VectorXd::Zero(1);
  spec.normalize_empty_blocks();
  EXPECT_THROW(closed_loop_certificate(spec, spec.E), NonMetzlerClosedLoop);
}

TEST(Corollary, MarginSign) {
  EXPECT_TRUE(corollary_detectability(scalar_problem()));
  EXPECT_FALSE(corollary_detectability(undetectable_problem()));
}
