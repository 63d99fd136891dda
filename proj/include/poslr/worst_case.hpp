#pragma once

#include <Eigen/Dense>

#include <optional>

#include "poslr/finite_horizon.hpp"
#include "poslr/problem.hpp"
#include "poslr/sign_pattern.hpp"

namespace poslr {

/// Maximizing disturbances for a value vector p:
/// v = diag(sign(H'p − δ))Gx and w = 0 while gamma ≥ F'p.
struct DisturbancePolicy {
  SignPattern v;
  bool w_zero = true;  // false when some gamma_i < (F'p)_i
  // Channels with gamma_i = (F'p)_i: any w_i ≥ 0 is optimal, 0 is used.
  Eigen::Array<bool, Eigen::Dynamic, 1> w_tight;
};

DisturbancePolicy worst_case_policies(const Problem& spec, const Eigen::VectorXd& p);

enum class DisturbanceMode { None, Worst };

/// Closed-loop samples on a uniform grid. Rows of x, u, v, w are time points.
struct Trajectory {
  Eigen::VectorXd t;
  Eigen::MatrixXd x, u, v, w;
  Eigen::VectorXd J;  // ∫ s'x + r'u − δ'v from 0 to t
};

/// ẋ = (A − BK + H diag(σ_v) G)x with u = −Kx and v = diag(σ_v)Gx held
/// fixed, integrated by RK4. The cost is integrated alongside the state.
Trajectory simulate_with_signs(const Problem& spec, const Eigen::MatrixXd& K,
                               const Eigen::VectorXi& v_signs, double T_sim, Index steps);

/// Static gain. Worst mode takes σ_v from `p`, which is then required.
Trajectory simulate(const Problem& spec, const Eigen::MatrixXd& K, DisturbanceMode mode,
                    double T_sim, Index steps,
                    const std::optional<Eigen::VectorXd>& p = std::nullopt);

/// Time-varying gain on the schedule grid. Worst mode re-evaluates σ_v from
/// p(t_k) at each grid point and holds it across the following step.
Trajectory simulate(const Problem& spec, const GainSchedule<double>& schedule,
                    DisturbanceMode mode, const ValueTrajectory<double>* values = nullptr);

/// Samples of x(t) = e^{Mt}x0 on a uniform grid (rows are time points),
/// by RK4.
Eigen::MatrixXd linear_flow(const Eigen::MatrixXd& M, const Eigen::VectorXd& x0, double T,
                            Index steps);

}  // namespace poslr
