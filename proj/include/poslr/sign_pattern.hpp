#pragma once

#include <Eigen/Dense>

#include "poslr/problem.hpp"

namespace poslr {

/// Signs σ_i ∈ {−1, +1} of a switching argument, with sign(0) resolved to +1
/// and a mask of the entries whose magnitude is within the tie tolerance.
struct SignPattern {
  Eigen::VectorXi sign;
  Eigen::Array<bool, Eigen::Dynamic, 1> tie;

  Index size() const { return sign.size(); }
  Index tie_count() const { return tie.count(); }
};

template <typename Derived>
SignPattern sign_pattern(const Eigen::MatrixBase<Derived>& argument,
                         typename Derived::Scalar tie_tolerance) {
  SignPattern out;
  const Index m = argument.size();
  out.sign.resize(m);
  out.tie.resize(m);
  for (Index i = 0; i < m; ++i) {
    out.sign(i) = argument(i) < 0 ? -1 : 1;
    out.tie(i) = std::abs(argument(i)) <= tie_tolerance;
  }
  return out;
}

/// 1e−9·(1 + ‖r‖∞ + ‖p‖∞·‖B‖∞), the band treated as a switching tie.
template <typename Scalar>
Scalar tie_tolerance(const ProblemSpec<Scalar>& spec, const VectorX<Scalar>& p) {
  const Scalar r_norm = spec.r.size() ? spec.r.template lpNorm<Eigen::Infinity>() : Scalar(0);
  const Scalar b_norm =
      spec.B.size() ? spec.B.cwiseAbs().rowwise().sum().maxCoeff() : Scalar(0);
  return Scalar(1e-9) * (Scalar(1) + r_norm + p.template lpNorm<Eigen::Infinity>() * b_norm);
}

/// K = diag(σ)E.
template <typename Derived>
MatrixX<typename Derived::Scalar> feedback_gain(const Eigen::MatrixBase<Derived>& E,
                                                const Eigen::VectorXi& sign) {
  using Scalar = typename Derived::Scalar;
  return sign.cast<Scalar>().asDiagonal() * E;
}

/// The switching argument r + B'p of the control channels.
template <typename Scalar>
VectorX<Scalar> control_switching_argument(const ProblemSpec<Scalar>& spec,
                                           const VectorX<Scalar>& p) {
  return spec.r + spec.B.transpose() * p;
}

/// Optimal control sign pattern sign(r_i + p'B_i) with ties marked.
template <typename Scalar>
SignPattern control_signs(const ProblemSpec<Scalar>& spec, const VectorX<Scalar>& p) {
  return sign_pattern(control_switching_argument(spec, p), tie_tolerance(spec, p));
}

/// All sign patterns that agree with `base` off the tie set; tie channels
/// take both signs. Order: base first, then binary counting over ties.
std::vector<Eigen::VectorXi> enumerate_tie_patterns(const SignPattern& base);

}  // namespace poslr
