#include <gtest/gtest.h>

#include "poslr/water_network.hpp"

using namespace poslr;

TEST(WaterNetwork, Defaults) {
  const WaterParams params = WaterParams::defaults(50, 2, 8, 4, 0.5);
  EXPECT_EQ(params.n, 50);
  EXPECT_EQ(params.zeta_u, 8);
  EXPECT_DOUBLE_EQ(params.rho_u, 4 * 0.5 / 8);
  EXPECT_NO_THROW(check_water_params(params));
}

TEST(WaterNetwork, StructureAndEntries) {
  const WaterParams params = WaterParams::defaults(4);
  const Problem spec = build_water_spec(params);
  const Index n = 4;
  ASSERT_EQ(spec.states(), n);
  ASSERT_EQ(spec.controls(), n - 1);
  ASSERT_EQ(spec.bounded_disturbances(), n - 1);
  EXPECT_EQ(spec.F.cols(), 0);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  A(0, 0) = -3;
  for (Index i = 1; i < n; ++i) {
    A(i, i) = -13;
    A(i - 1, i) = 10;
  }
  EXPECT_EQ(spec.A, A);
  for (Index j = 0; j < n - 1; ++j) {
    EXPECT_EQ(spec.B(j, j), -1);
    EXPECT_EQ(spec.B(j + 1, j), 1);
    EXPECT_EQ(spec.B.col(j).cwiseAbs().sum(), 2);
    EXPECT_EQ(spec.E(j, j + 1), 10);
    EXPECT_EQ(spec.E.row(j).sum(), 10);
    EXPECT_DOUBLE_EQ(spec.G(j, j), 3.0 * (j + 1) / n);
    EXPECT_DOUBLE_EQ(spec.r(j), 0.3 * (j + 2) / n);
  }
  EXPECT_EQ(spec.H, -spec.B);
  EXPECT_EQ(spec.delta, Eigen::VectorXd::Ones(n - 1));
  EXPECT_EQ(spec.x0, Eigen::VectorXd::Ones(n));
  EXPECT_TRUE(validate(spec).ok());
}

TEST(WaterNetwork, LastSectionCarriesControlCost) {
  const Problem spec = build_water_spec(WaterParams::defaults(5));
  EXPECT_EQ(spec.s(0), 1);
  for (Index i = 1; i < 4; ++i) EXPECT_EQ(spec.s(i), 0);
  EXPECT_DOUBLE_EQ(spec.s(4), 10 * 0.3);
}

TEST(WaterNetwork, Rain) {
  WaterParams params = WaterParams::defaults(6);
  params.rain = true;
  params.gamma = 2.5;
  const Problem spec = build_water_spec(params, Horizon<double>::finite(24));
  EXPECT_EQ(spec.F, Eigen::MatrixXd::Ones(6, 1));
  EXPECT_EQ(spec.gamma, Eigen::VectorXd::Constant(1, 2.5));
  EXPECT_TRUE(spec.horizon.is_finite());
}

TEST(WaterNetwork, InvalidParameters) {
  WaterParams params = WaterParams::defaults(1);
  EXPECT_THROW(check_water_params(params), InvariantViolation);
  params = WaterParams::defaults();
  params.zeta_u = 11;
  EXPECT_THROW(build_water_spec(params), InvariantViolation);
  params = WaterParams::defaults();
  params.rho_u = 0.31;
  EXPECT_THROW(check_water_params(params), InvariantViolation);
  params = WaterParams::defaults();
  params.alpha = -1;
  EXPECT_THROW(check_water_params(params), InvariantViolation);
}

TEST(Sweep, EmptyList) {
  EXPECT_TRUE(sweep_cost_vs_n(WaterParams::defaults(), {}).empty());
}

TEST(Sweep, RowsKeepOrderAndRecordFailures) {
  const std::vector<Index> sizes{10, 1, 20, 5};
  const auto rows = sweep_cost_vs_n(WaterParams::defaults(), sizes);
  ASSERT_EQ(rows.size(), sizes.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].n, sizes[i]);
  EXPECT_FALSE(rows[1].error.empty());
  for (std::size_t i : {0u, 2u, 3u}) {
    EXPECT_TRUE(rows[i].error.empty()) << rows[i].error;
    EXPECT_EQ(rows[i].status, IterationStatus::Converged);
    EXPECT_GT(rows[i].cost, 0);
  }
}

TEST(Sweep, MatchesDirectSolve) {
  const auto rows = sweep_cost_vs_n(WaterParams::defaults(), {12});
  const Problem spec = build_water_spec(WaterParams::defaults(12));
  const auto vi = value_iteration(spec);
  ASSERT_TRUE(vi.converged());
  EXPECT_EQ(rows[0].cost, vi.p.dot(spec.x0));
}

TEST(WaterNetwork, CostMarginEntries) {
  const Index n = 6;
  const WaterParams params = WaterParams::defaults(n);
  const auto report = validate(build_water_spec(params));
  ASSERT_EQ(report.cost_margin.size(), n);
  const double zv_rv = params.zeta_v * params.rho_v;
  EXPECT_NEAR(report.cost_margin(0), params.rho_s + zv_rv / n, 1e-14);
  for (Index i = 1; i + 1 < n; ++i)
    EXPECT_NEAR(report.cost_margin(i), -(double(i) / n) * (params.zeta_u * params.rho_u - zv_rv),
                1e-14);
  EXPECT_NEAR(report.cost_margin(n - 1), 0, 1e-14);
}

TEST(Sweep, SmallNetworksIncrease) {
  const auto rows = sweep_cost_vs_n(WaterParams::defaults(), {2, 4, 8});
  EXPECT_LT(rows[0].cost, rows[1].cost);
  EXPECT_LT(rows[1].cost, rows[2].cost);
}
