#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "poslr/finite_horizon.hpp"
#include "poslr/problem.hpp"
#include "poslr/sign_pattern.hpp"

namespace poslr {

enum class IterationStatus { Converged, Diverged, IterCap };

inline const char* to_string(IterationStatus s) {
  switch (s) {
    case IterationStatus::Converged: return "converged";
    case IterationStatus::Diverged: return "diverged";
    case IterationStatus::IterCap: return "iteration_cap";
  }
  return "unknown";
}

struct ValueIterationOptions {
  std::optional<double> h;  // discretization rate; default from default_rate()
  double tolerance = tol::fixed_point;
  long max_iterations = 1000000;
  double divergence_cap = 1e12;
  // Consecutive iterations of steady geometric step growth that count as
  // divergence.
  int growth_checks = 100;
  // After the stopping test passes, keep iterating while the step still
  // shrinks, for at most as many iterations again. Drives the fixed-point
  // error toward round-off.
  bool polish = true;
  bool record_trace = false;
};

struct IterateRecord {
  long k = 0;
  double p_norm = 0;
  double step_norm = 0;
};

template <typename Scalar>
struct ValueVector {
  VectorX<Scalar> p;
  Scalar residual = 0;  // bellman_residual(spec, p)
  long iterations = 0;
  Scalar h = 0;
  IterationStatus status = IterationStatus::IterCap;
  std::vector<IterateRecord> trace;

  bool converged() const { return status == IterationStatus::Converged; }
};

template <typename Scalar>
struct StaticGain {
  SignPattern pattern;
  MatrixX<Scalar> K;
};

/// max(max_i −(A − |B|E)_ii, 0) + 1: strictly inside A − |B|E + hI ≥ 0.
template <typename Scalar>
Scalar default_rate(const ProblemSpec<Scalar>& spec) {
  const VectorX<Scalar> diag = worst_control_matrix(spec).diagonal();
  return std::max(Scalar(0), (-diag).maxCoeff()) + Scalar(1);
}

template <typename Scalar>
bool rate_is_admissible(const ProblemSpec<Scalar>& spec, Scalar h) {
  if (!(h > 0)) return false;
  const VectorX<Scalar> diag = worst_control_matrix(spec).diagonal();
  return (diag.array() + h).minCoeff() >= -Scalar(tol::metzler);
}

/// ‖s + A'p − E'|r + B'p| + G'|−δ + H'p|‖∞
template <typename Scalar>
Scalar bellman_residual(const ProblemSpec<Scalar>& spec, const VectorX<Scalar>& p) {
  if (p.size() != spec.states()) throw DimensionMismatch("p must have n entries");
  return hjb_rhs(spec, p).template lpNorm<Eigen::Infinity>();
}

/// Fixed-point iteration p_{k+1} = ŝ + Â'p_k − Ê'|B̂'p_k + r̂| + Ĝ'|Ĥ'p_k − δ̂|
/// from p_0 = 0, where Â = A/h + I, B̂ = B/h, Ĥ = H/h, ŝ = s/h, r̂ = r/h,
/// δ̂ = δ/h, Ê = E, Ĝ = G. Its finite limit, when it exists, solves the
/// algebraic Bellman equation.
template <typename Scalar>
ValueVector<Scalar> value_iteration(const ProblemSpec<Scalar>& spec,
                                    const ValueIterationOptions& options = {}) {
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;
  require_valid(spec);
  const Index n = spec.states();
  const Scalar h = options.h ? Scalar(*options.h) : default_rate(spec);
  if (!rate_is_admissible(spec, h)) {
    std::ostringstream os;
    os << "rate h = " << h << " violates A - |B|E + hI >= 0";
    throw InvalidArgument(os.str());
  }

  const Matrix At = (spec.A / h + Matrix::Identity(n, n)).transpose();
  const Matrix Bt = spec.B.transpose() / h;
  const Matrix Ht = spec.H.transpose() / h;
  const Matrix Et = spec.E.transpose();
  const Matrix Gt = spec.G.transpose();
  const Vector s = spec.s / h, r = spec.r / h, delta = spec.delta / h;
  const bool has_v = spec.H.cols() > 0;

  ValueVector<Scalar> out;
  out.h = h;
  Vector p = Vector::Zero(n);
  Vector next(n);
  auto apply = [&](const Vector& x, Vector& y) {
    y.noalias() = s + At * x;
    y.noalias() -= Et * (Bt * x + r).cwiseAbs();
    if (has_v) y.noalias() += Gt * (Ht * x - delta).cwiseAbs();
  };
  auto polish = [&](Vector& x, Scalar last_step, long budget) {
    const Scalar floor = Scalar(1e-15) * (Scalar(1) + x.template lpNorm<Eigen::Infinity>());
    for (long j = 0; j < budget && last_step > floor; ++j) {
      apply(x, next);
      const Scalar step = (next - x).template lpNorm<Eigen::Infinity>();
      if (!(step < last_step)) break;
      x.swap(next);
      last_step = step;
      ++out.iterations;
    }
  };
  Scalar previous_step = 0, previous_ratio = 0;
  int growth_run = 0;
  for (long k = 0; k < options.max_iterations; ++k) {
    apply(p, next);

    const Scalar step = (next - p).template lpNorm<Eigen::Infinity>();
    const Scalar p_norm = p.template lpNorm<Eigen::Infinity>();
    if (options.record_trace)
      out.trace.push_back({k + 1, double(next.template lpNorm<Eigen::Infinity>()), double(step)});
    const bool converged = step <= Scalar(options.tolerance) * (Scalar(1) + p_norm);
    p.swap(next);
    out.iterations = k + 1;

    if (converged) {
      out.status = IterationStatus::Converged;
      if (options.polish) polish(p, step, k + 1);
      break;
    }
    if (!p.allFinite() || p.template lpNorm<Eigen::Infinity>() > Scalar(options.divergence_cap)) {
      out.status = IterationStatus::Diverged;
      break;
    }
    if (previous_step > 0) {
      const Scalar ratio = step / previous_step;
      const bool steady = std::abs(ratio - previous_ratio) <= Scalar(1e-3) * ratio;
      growth_run = (ratio > Scalar(1) + Scalar(1e-9) && steady) ? growth_run + 1 : 0;
      previous_ratio = ratio;
      if (growth_run >= options.growth_checks) {
        out.status = IterationStatus::Diverged;
        break;
      }
    }
    previous_step = step;
  }
  out.p = std::move(p);
  out.residual = out.p.allFinite() ? bellman_residual(spec, out.p)
                                   : std::numeric_limits<Scalar>::infinity();
  return out;
}

template <typename Scalar>
GammaCheck<Scalar> check_gamma_infinite(const ProblemSpec<Scalar>& spec,
                                        const VectorX<Scalar>& p) {
  return check_gamma(spec, p);
}

/// σ_i = sign(r_i + p'B_i), ties resolved to +1; K = diag(σ)E.
template <typename Scalar>
StaticGain<Scalar> extract_static_gain(const ProblemSpec<Scalar>& spec,
                                       const VectorX<Scalar>& p) {
  StaticGain<Scalar> out;
  out.pattern = control_signs(spec, p);
  out.K = feedback_gain(spec.E, out.pattern.sign);
  return out;
}

/// ‖p(h1) − p(h2)‖∞ for two admissible rates. The limit solves the same
/// algebraic equation for every admissible h.
template <typename Scalar>
Scalar h_invariance_check(const ProblemSpec<Scalar>& spec, Scalar h1, Scalar h2,
                          ValueIterationOptions options = {}) {
  options.h = double(h1);
  const auto first = value_iteration(spec, options);
  options.h = double(h2);
  const auto second = value_iteration(spec, options);
  for (const auto* run : {&first, &second}) {
    if (!run->converged()) {
      std::ostringstream os;
      os << "value iteration with h = " << run->h << " ended " << to_string(run->status);
      throw SolveFailed(os.str());
    }
  }
  return (first.p - second.p).template lpNorm<Eigen::Infinity>();
}

}  // namespace poslr
