#include "poslr/worst_case.hpp"

#include <functional>

namespace poslr {
namespace {

Eigen::VectorXi worst_v_signs(const Problem& spec, const Eigen::VectorXd& p) {
  return worst_case_policies(spec, p).v.sign;
}

void require_gain_bound(const Problem& spec, const Eigen::MatrixXd& K) {
  if (K.rows() != spec.controls() || K.cols() != spec.states())
    throw DimensionMismatch("K must be m x n");
  if (((K.cwiseAbs() - spec.E).array() > tol::sol).any())
    throw InvalidArgument("|K| <= E is violated");
}

// Policy for step k: fills K and σ_v, returns true when they changed.
using StepPolicy = std::function<bool(Index, Eigen::MatrixXd&, Eigen::VectorXi&)>;

Trajectory integrate(const Problem& spec, double T_sim, Index steps, const StepPolicy& policy) {
  if (!(T_sim >= 0)) throw InvalidArgument("simulation horizon must be nonnegative");
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  const Index n = spec.states(), m = spec.controls(), c = spec.bounded_disturbances();
  const double h = T_sim / double(steps);

  Trajectory out;
  out.t = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, T_sim);
  out.x.resize(steps + 1, n);
  out.u.resize(steps + 1, m);
  out.v.resize(steps + 1, c);
  out.w = Eigen::MatrixXd::Zero(steps + 1, spec.rain_channels());
  out.J.resize(steps + 1);

  Eigen::MatrixXd K(m, n), M(n, n);
  Eigen::VectorXi sigma(c);
  Eigen::RowVectorXd cost(n);
  Eigen::VectorXd x = spec.x0;
  double J = 0;
  for (Index k = 0; k <= steps; ++k) {
    if (policy(k, K, sigma) || k == 0) {
      const Eigen::MatrixXd VG = sigma.cast<double>().asDiagonal() * spec.G;
      M = spec.A - spec.B * K + spec.H * VG;
      // s'x + r'(−Kx) − δ'(diag(σ)Gx)
      cost = spec.s.transpose() - spec.r.transpose() * K - spec.delta.transpose() * VG;
    }
    out.x.row(k) = x.transpose();
    out.u.row(k) = (-K * x).transpose();
    out.v.row(k) = (sigma.cast<double>().asDiagonal() * (spec.G * x)).transpose();
    out.J(k) = J;
    if (k == steps) break;

    const Eigen::VectorXd k1 = M * x;
    const Eigen::VectorXd x2 = x + (h / 2) * k1;
    const Eigen::VectorXd k2 = M * x2;
    const Eigen::VectorXd x3 = x + (h / 2) * k2;
    const Eigen::VectorXd k3 = M * x3;
    const Eigen::VectorXd x4 = x + h * k3;
    const Eigen::VectorXd k4 = M * x4;
    // Same RK4 stages applied to the augmented state (x, J).
    J += (h / 6) * cost.dot(x + 2 * x2 + 2 * x3 + x4);
    x += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!x.allFinite() || !std::isfinite(J))
      throw NonFiniteState("closed-loop state overflowed during simulation");
  }
  return out;
}

}  // namespace

DisturbancePolicy worst_case_policies(const Problem& spec, const Eigen::VectorXd& p) {
  if (p.size() != spec.states()) throw DimensionMismatch("p must have n entries");
  DisturbancePolicy out;
  const Eigen::VectorXd argument = spec.H.transpose() * p - spec.delta;
  const double scale = 1.0 + spec.delta.lpNorm<Eigen::Infinity>() +
                       p.lpNorm<Eigen::Infinity>() *
                           (spec.H.size() ? spec.H.cwiseAbs().colwise().sum().maxCoeff() : 0.0);
  out.v = sign_pattern(argument, 1e-9 * scale);
  const GammaCheck<double> gamma = check_gamma(spec, p);
  out.w_zero = gamma.ok;
  out.w_tight = gamma.margin.array().abs() <= tol::sol;
  return out;
}

Trajectory simulate_with_signs(const Problem& spec, const Eigen::MatrixXd& K,
                               const Eigen::VectorXi& v_signs, double T_sim, Index steps) {
  check_dimensions(spec);
  require_gain_bound(spec, K);
  if (v_signs.size() != spec.bounded_disturbances())
    throw DimensionMismatch("v sign vector must have c entries");
  return integrate(spec, T_sim, steps, [&](Index, Eigen::MatrixXd& gain, Eigen::VectorXi& sigma) {
    gain = K;
    sigma = v_signs;
    return false;
  });
}

Trajectory simulate(const Problem& spec, const Eigen::MatrixXd& K, DisturbanceMode mode,
                    double T_sim, Index steps, const std::optional<Eigen::VectorXd>& p) {
  Eigen::VectorXi sigma = Eigen::VectorXi::Zero(spec.bounded_disturbances());
  if (mode == DisturbanceMode::Worst) {
    if (!p) throw InvalidArgument("worst-case disturbances need a value vector p");
    sigma = worst_v_signs(spec, *p);
  }
  return simulate_with_signs(spec, K, sigma, T_sim, steps);
}

Trajectory simulate(const Problem& spec, const GainSchedule<double>& schedule,
                    DisturbanceMode mode, const ValueTrajectory<double>* values) {
  check_dimensions(spec);
  const Index points = schedule.points();
  if (points < 2) throw InvalidArgument("gain schedule needs at least two points");
  if (mode == DisturbanceMode::Worst) {
    if (!values) throw InvalidArgument("worst-case disturbances need the value trajectory");
    if (values->points() != points) throw DimensionMismatch("schedule and value grids differ");
  }
  const Index c = spec.bounded_disturbances();
  Eigen::VectorXi previous_sign, previous_sigma;
  return integrate(
      spec, schedule.times(points - 1), points - 1,
      [&](Index k, Eigen::MatrixXd& gain, Eigen::VectorXi& sigma) {
        const Eigen::VectorXi sign = schedule.signs.row(k).transpose();
        const Eigen::VectorXi next_sigma = mode == DisturbanceMode::Worst
                                               ? worst_v_signs(spec, values->at(k))
                                               : Eigen::VectorXi::Zero(c).eval();
        const bool changed = k == 0 || sign != previous_sign || next_sigma != previous_sigma;
        if (changed) {
          gain = feedback_gain(schedule.E, sign);
          sigma = next_sigma;
          previous_sign = sign;
          previous_sigma = next_sigma;
        }
        return changed;
      });
}

Eigen::MatrixXd linear_flow(const Eigen::MatrixXd& M, const Eigen::VectorXd& x0, double T,
                            Index steps) {
  if (M.rows() != M.cols() || M.rows() != x0.size()) throw DimensionMismatch("M and x0 disagree");
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  const double h = T / double(steps);
  Eigen::MatrixXd out(steps + 1, x0.size());
  Eigen::VectorXd x = x0;
  out.row(0) = x.transpose();
  for (Index k = 1; k <= steps; ++k) {
    const Eigen::VectorXd k1 = M * x;
    const Eigen::VectorXd k2 = M * (x + (h / 2) * k1);
    const Eigen::VectorXd k3 = M * (x + (h / 2) * k2);
    const Eigen::VectorXd k4 = M * (x + h * k3);
    x += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!x.allFinite()) throw NonFiniteState("state overflowed");
    out.row(k) = x.transpose();
  }
  return out;
}

}  // namespace poslr
