#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "poslr/problem.hpp"
#include "poslr/sign_pattern.hpp"

namespace poslr {

/// Value coefficients p(t) on a uniform forward grid 0 = t_0 < … < t_N = T.
/// Row k of `values` is p(t_k)'; the last row is exactly zero.
template <typename Scalar>
struct ValueTrajectory {
  VectorX<Scalar> times;
  MatrixX<Scalar> values;
  Scalar step = 0;

  Index points() const { return times.size(); }
  VectorX<Scalar> at(Index k) const { return values.row(k).transpose(); }
  VectorX<Scalar> initial() const { return at(0); }
};

/// Time-varying bang-bang gain K(t_k) = diag(σ(t_k))E on the trajectory grid.
template <typename Scalar>
struct GainSchedule {
  VectorX<Scalar> times;
  Eigen::MatrixXi signs;                           // points × m
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> ties;  // points × m
  MatrixX<Scalar> E;

  Index points() const { return times.size(); }
  MatrixX<Scalar> gain(Index k) const {
    return feedback_gain(E, Eigen::VectorXi(signs.row(k).transpose()));
  }
};

template <typename Scalar>
struct GammaCheck {
  bool ok = true;
  VectorX<Scalar> margin;  // gamma − F'p
};

/// Right-hand side of the backward value equation in time-to-go:
/// s + A'p − E'|r + B'p| + G'|−δ + H'p|.
template <typename Scalar>
VectorX<Scalar> hjb_rhs(const ProblemSpec<Scalar>& spec, const VectorX<Scalar>& p) {
  VectorX<Scalar> out = spec.s + spec.A.transpose() * p -
                        spec.E.transpose() * (spec.r + spec.B.transpose() * p).cwiseAbs();
  if (spec.H.cols() > 0)
    out.noalias() += spec.G.transpose() * (spec.H.transpose() * p - spec.delta).cwiseAbs();
  return out;
}

/// max(10⁴, ⌈1000·T⌉)
template <typename Scalar>
Index default_steps(Scalar final_time) {
  return std::max<Index>(10000, static_cast<Index>(std::ceil(Scalar(1000) * final_time)));
}

/// Integrates −ṗ = s + A'p − E'|r + B'p| + G'|−δ + H'p|, p(T) = 0 backward
/// from T with classical RK4 at the uniform step T/steps.
template <typename Scalar>
ValueTrajectory<Scalar> solve_hjb_ode(const ProblemSpec<Scalar>& spec, Index steps) {
  require_valid(spec);
  if (!spec.horizon.is_finite()) throw InvalidArgument("solve_hjb_ode needs a finite horizon");
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  const Scalar T = spec.horizon.final_time();
  const Index n = spec.states();
  const Scalar h = T / Scalar(steps);

  ValueTrajectory<Scalar> traj;
  traj.step = h;
  traj.times.resize(steps + 1);
  for (Index k = 0; k <= steps; ++k) traj.times(k) = h * Scalar(k);
  traj.times(steps) = T;
  traj.values.resize(steps + 1, n);

  VectorX<Scalar> p = VectorX<Scalar>::Zero(n);
  traj.values.row(steps).setZero();
  for (Index k = 1; k <= steps; ++k) {
    const VectorX<Scalar> k1 = hjb_rhs(spec, p);
    const VectorX<Scalar> k2 = hjb_rhs(spec, VectorX<Scalar>(p + (h / 2) * k1));
    const VectorX<Scalar> k3 = hjb_rhs(spec, VectorX<Scalar>(p + (h / 2) * k2));
    const VectorX<Scalar> k4 = hjb_rhs(spec, VectorX<Scalar>(p + h * k3));
    p += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!p.allFinite())
      throw NonFiniteState("value trajectory overflowed during backward integration");
    traj.values.row(steps - k) = p.transpose();
  }
  return traj;
}

template <typename Scalar>
ValueTrajectory<Scalar> solve_hjb_ode(const ProblemSpec<Scalar>& spec) {
  if (!spec.horizon.is_finite()) throw InvalidArgument("solve_hjb_ode needs a finite horizon");
  return solve_hjb_ode(spec, default_steps(spec.horizon.final_time()));
}

/// gamma ≥ F'p (the boundary is admitted, up to tol_sol).
template <typename Scalar>
GammaCheck<Scalar> check_gamma(const ProblemSpec<Scalar>& spec, const VectorX<Scalar>& p) {
  if (p.size() != spec.states()) throw DimensionMismatch("p must have n entries");
  GammaCheck<Scalar> out;
  out.margin = spec.gamma - spec.F.transpose() * p;
  out.ok = out.margin.size() == 0 || out.margin.minCoeff() >= -Scalar(tol::sol);
  return out;
}

template <typename Scalar>
GammaCheck<Scalar> check_gamma_finite(const ProblemSpec<Scalar>& spec,
                                      const ValueTrajectory<Scalar>& traj) {
  return check_gamma(spec, traj.initial());
}

template <typename Scalar>
GainSchedule<Scalar> extract_gain_schedule(const ProblemSpec<Scalar>& spec,
                                           const ValueTrajectory<Scalar>& traj) {
  const Index m = spec.controls();
  GainSchedule<Scalar> out;
  out.times = traj.times;
  out.E = spec.E;
  out.signs.resize(traj.points(), m);
  out.ties.resize(traj.points(), m);
  for (Index k = 0; k < traj.points(); ++k) {
    const SignPattern pattern = control_signs(spec, traj.at(k));
    out.signs.row(k) = pattern.sign.transpose();
    out.ties.row(k) = pattern.tie.transpose();
  }
  return out;
}

/// p(0)'x0
template <typename Scalar>
Scalar value_at(const ValueTrajectory<Scalar>& traj, const VectorX<Scalar>& x0) {
  if (x0.size() != traj.values.cols()) throw DimensionMismatch("x0 must have n entries");
  return traj.initial().dot(x0);
}

}  // namespace poslr
