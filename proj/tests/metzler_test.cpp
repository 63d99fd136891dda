#include <gtest/gtest.h>

#include <random>

#include "poslr/metzler.hpp"
#include "poslr/reference_problems.hpp"
#include "poslr/water_network.hpp"
#include "test_util.hpp"

using namespace poslr;

namespace {

double eigen_abscissa(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  return es.eigenvalues().real().maxCoeff();
}

bool contains_pair(const std::vector<EigenPair<double>>& pairs, double lambda,
                   const Eigen::VectorXd& v) {
  for (const auto& p : pairs)
    if (std::abs(p.lambda - lambda) < 1e-9 && (p.v - v).lpNorm<Eigen::Infinity>() < 1e-9)
      return true;
  return false;
}

}  // namespace

TEST(SpectralAbscissa, WaterNetworkOpenLoop) {
  const Problem spec = build_water_spec(WaterParams::defaults());
  EXPECT_DOUBLE_EQ(spectral_abscissa(spec.A), -3.0);
}

TEST(SpectralAbscissa, WaterNetworkWithDisturbance) {
  const Problem spec = build_water_spec(WaterParams::defaults());
  const Eigen::MatrixXd M = spec.A + spec.H.cwiseAbs() * spec.G;
  EXPECT_NEAR(spectral_abscissa(M), 0.19, 0.01);
}

TEST(SpectralAbscissa, ZeroMatrix) {
  EXPECT_EQ(spectral_abscissa(Eigen::MatrixXd::Zero(4, 4)), 0.0);
}

TEST(SpectralAbscissa, RejectsNonMetzler) {
  EXPECT_THROW(spectral_abscissa(Eigen::MatrixXd{{0, -1}, {1, 0}}), InvalidArgument);
}

TEST(SpectralAbscissa, MatchesDenseEigensolver) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 20;
    const Eigen::MatrixXd M = poslr::testing::random_metzler(rng, n, trial % 3 == 0 ? 0.1 : 0.4);
    EXPECT_NEAR(spectral_abscissa(M), eigen_abscissa(M), 1e-9 * (1 + M.norm()))
        << "trial " << trial;
  }
}

TEST(SpectralAbscissa, ShiftInvariance) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> shift(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 20;
    const Eigen::MatrixXd M = poslr::testing::random_metzler(rng, n);
    const double c = shift(rng);
    const Eigen::MatrixXd shifted = M + c * Eigen::MatrixXd::Identity(n, n);
    EXPECT_NEAR(spectral_abscissa(shifted), spectral_abscissa(M) + c, 1e-9);
  }
}

TEST(StronglyConnected, ReverseTopologicalOrder) {
  // 0 → 1 → 2 → 1, 3 isolated.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4, 4);
  M(0, 1) = 1;
  M(1, 2) = 1;
  M(2, 1) = 1;
  const auto components = strongly_connected_components(M);
  ASSERT_EQ(components.size(), 3u);
  std::size_t pos_01 = 0, pos_0 = 0;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (components[k].size() == 2) pos_01 = k;
    if (components[k].size() == 1 && components[k][0] == 0) pos_0 = k;
  }
  EXPECT_LT(pos_01, pos_0);
}

TEST(IsHurwitz, NonuniqueGainClosedLoop) {
  const Problem spec = nonunique_gain_problem();
  const Eigen::MatrixXd K1 = spec.E;  // σ = (+1, +1)
  const auto cert = is_hurwitz(spec.A - spec.B * K1);
  EXPECT_TRUE(cert.hurwitz);
  ASSERT_TRUE(cert.positive_vector.has_value());
  EXPECT_TRUE(cert.lp_agrees);
  const Eigen::VectorXd v = *cert.positive_vector;
  EXPECT_GE(v.minCoeff(), 1 - 1e-9);
  EXPECT_LE(((spec.A - spec.B * K1) * v).maxCoeff(), -1 + 1e-9);
}

TEST(IsHurwitz, PositiveScalar) {
  const auto cert = is_hurwitz(Eigen::MatrixXd::Constant(1, 1, 1.0));
  EXPECT_FALSE(cert.hurwitz);
  EXPECT_FALSE(cert.positive_vector.has_value());
}

TEST(IsHurwitz, WaterNetworkWithDisturbance) {
  const Problem spec = build_water_spec(WaterParams::defaults());
  const auto cert = is_hurwitz(spec.A + spec.H.cwiseAbs() * spec.G);
  EXPECT_FALSE(cert.hurwitz);
  EXPECT_NEAR(cert.abscissa, 0.19, 0.01);
}

TEST(IsHurwitz, LpAgreesOnRandomMetzler) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd M = poslr::testing::random_metzler(rng, 2 + trial % 8);
    const auto cert = is_hurwitz(M);
    EXPECT_EQ(cert.hurwitz, eigen_abscissa(M) < -1e-9);
    EXPECT_TRUE(cert.lp_agrees);
    EXPECT_EQ(hurwitz_lp_certificate(M).has_value(), cert.hurwitz);
  }
}

TEST(NonnegEigenpairs, UndetectableOpenLoop) {
  const Problem spec = undetectable_problem();
  const auto pairs = nonneg_eigenpairs(spec.A, 0.0);
  EXPECT_TRUE(contains_pair(pairs, 1.0, Eigen::Vector3d(0, 0, 1)));
}

TEST(NonnegEigenpairs, AllNegative) {
  const Eigen::MatrixXd M = Eigen::Vector2d(-1, -2).asDiagonal();
  EXPECT_TRUE(nonneg_eigenpairs(M, 0.0).empty());
}

TEST(NonnegEigenpairs, ExchangeMatrix) {
  const Eigen::MatrixXd M{{0, 1}, {1, 0}};
  const auto pairs = nonneg_eigenpairs(M, 0.0);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_NEAR(pairs[0].lambda, 1, 1e-9);
  EXPECT_NEAR((pairs[0].v - Eigen::Vector2d(1, 1)).lpNorm<Eigen::Infinity>(), 0, 1e-9);
}

TEST(NonnegEigenpairs, RepeatedEigenvalueBlocks) {
  // Two identical decoupled classes at λ = 2 plus one reached from both.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3, 3);
  M(0, 0) = 2;
  M(1, 1) = 2;
  M(2, 2) = -1;
  M(2, 0) = 1;
  M(2, 1) = 1;
  const auto pairs = nonneg_eigenpairs(M, 0.0);
  ASSERT_FALSE(pairs.empty());
  for (const auto& p : pairs) {
    EXPECT_NEAR(p.lambda, 2, 1e-9);
    EXPECT_GE(p.v.minCoeff(), 0);
    EXPECT_LE((M * p.v - p.lambda * p.v).lpNorm<Eigen::Infinity>(), 1e-9);
  }
}

TEST(NonnegEigenpairs, DefectivePerronRoot) {
  // Jordan block at λ = 1: e_1 is the only eigenvector.
  const Eigen::MatrixXd M{{1, 0}, {2, 1}};
  const auto pairs = nonneg_eigenpairs(M, 0.0);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_NEAR(pairs[0].lambda, 1, 1e-9);
  EXPECT_NEAR((pairs[0].v - Eigen::Vector2d(0, 1)).lpNorm<Eigen::Infinity>(), 0, 1e-9);
}

TEST(NonnegEigenpairs, ResidualsOnRandomMetzler) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 10;
    const Eigen::MatrixXd M = poslr::testing::random_metzler(rng, n, 0.2);
    const double floor = -10;
    const auto pairs = nonneg_eigenpairs(M, floor);
    EXPECT_FALSE(pairs.empty()) << "the Perron root always carries a nonnegative vector";
    if (pairs.empty()) continue;
    EXPECT_NEAR(pairs.front().lambda, eigen_abscissa(M), 1e-8 * (1 + M.norm()));
    for (const auto& p : pairs) {
      EXPECT_GE(p.v.minCoeff(), 0);
      EXPECT_NEAR(p.v.maxCoeff(), 1, 1e-12);
      EXPECT_LE((M * p.v - p.lambda * p.v).lpNorm<Eigen::Infinity>(), 1e-8 * (1 + M.norm()));
    }
  }
}

TEST(DistinguishedEigenpairs, AgreesWithNonnegEigenpairsOnPerronRoot) {
  std::mt19937 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd M = poslr::testing::random_metzler(rng, 3 + trial % 6, 0.3);
    const double rho = spectral_abscissa(M);
    const auto pairs = distinguished_eigenpairs(M, rho);
    ASSERT_FALSE(pairs.empty());
    EXPECT_NEAR(pairs.front().lambda, rho, 1e-9 * (1 + M.norm()));
  }
}
