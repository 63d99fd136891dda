#pragma once

#include "poslr/problem.hpp"

namespace poslr {

/// Three states, two controls, no disturbances. The first control channel
/// has a zero switching argument for all time, so two bang-bang gains are
/// optimal: p(t) = (1 − e^{−(T−t)})1.
inline Problem nonunique_gain_problem(Horizon<double> horizon = Horizon<double>::finite(10)) {
  Problem spec;
  spec.A.resize(3, 3);
  spec.A << -2, 1, 0, 1, -2, 0, 0, 0, 1;
  spec.B.resize(3, 2);
  spec.B << 1, 0, -1, 0, 0, 2;
  spec.E.resize(2, 3);
  spec.E << 1, 1, 0, 0, 0, 1;
  spec.s = Eigen::VectorXd::Ones(3);
  spec.r = Eigen::VectorXd::Zero(2);
  spec.x0 = Eigen::VectorXd::Ones(3);
  spec.horizon = horizon;
  spec.normalize_empty_blocks();
  return spec;
}

/// The third state is unstable, uncontrolled and unpenalized: the Bellman
/// equation has the finite solution p = [1, 1, 0] while the regulator LP
/// is unbounded in p_3.
inline Problem undetectable_problem() {
  Problem spec;
  spec.A.resize(3, 3);
  spec.A << -2, 1, 0, 1, -2, 0, 0, 0, 1;
  spec.B.resize(3, 1);
  spec.B << 1, -1, 0;
  spec.E.resize(1, 3);
  spec.E << 1, 1, 0;
  spec.s.resize(3);
  spec.s << 1, 1, 0;
  spec.r = Eigen::VectorXd::Zero(1);
  spec.x0 = Eigen::VectorXd::Ones(3);
  spec.normalize_empty_blocks();
  return spec;
}

/// ẋ = −x + u, |u| ≤ x, cost ∫ 2x. Value p = 1 − e^{−2(T−t)} on a finite
/// horizon and p = 1 with K = 1 on the infinite one.
inline Problem scalar_problem(Horizon<double> horizon = Horizon<double>::infinite()) {
  Problem spec;
  spec.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  spec.B = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.E = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.s = Eigen::VectorXd::Constant(1, 2.0);
  spec.r = Eigen::VectorXd::Zero(1);
  spec.x0 = Eigen::VectorXd::Ones(1);
  spec.horizon = horizon;
  spec.normalize_empty_blocks();
  return spec;
}

}  // namespace poslr
