#include "poslr/lr_lp.hpp"

#include <cmath>

#include "poslr/infinite_horizon.hpp"
#include "poslr/sign_pattern.hpp"

namespace poslr {
namespace {

void require_disturbance_free(const Problem& spec) {
  require_valid(spec);
  const bool h_zero = spec.H.size() == 0 || spec.H.isZero(0.0);
  const bool g_zero = spec.G.size() == 0 || spec.G.isZero(0.0);
  if (!h_zero || !g_zero)
    throw ModelMismatch("the regulator linear programs require H = G' = 0");
}

}  // namespace

bool ControllerSet::any_hurwitz() const {
  for (const auto& c : candidates)
    if (c.hurwitz) return true;
  return false;
}

lp::Model build_primal_lr(const Problem& spec) {
  const Index n = spec.states(), m = spec.controls();
  lp::Model model = lp::Model::with_variables(n + m);  // [p, ζ], both ≥ 0
  model.objective = lp::Objective::Maximize;
  model.cost.head(n).setOnes();
  Eigen::RowVectorXd row(n + m);
  for (Index i = 0; i < n; ++i) {
    // A_i'p − E_i'ζ ≥ −s_i  (column i of A and E)
    row << spec.A.col(i).transpose(), -spec.E.col(i).transpose();
    model.add_row(row, lp::RowSense::GreaterEqual, -spec.s(i));
  }
  for (Index j = 0; j < m; ++j) {
    Eigen::RowVectorXd unit = Eigen::RowVectorXd::Zero(m);
    unit(j) = 1.0;
    row << spec.B.col(j).transpose(), -unit;
    model.add_row(row, lp::RowSense::LessEqual, -spec.r(j));  // B_j'p − ζ_j ≤ −r_j
    row << spec.B.col(j).transpose(), unit;
    model.add_row(row, lp::RowSense::GreaterEqual, -spec.r(j));  // B_j'p + ζ_j ≥ −r_j
  }
  return model;
}

lp::Model build_dual_lr(const Problem& spec) {
  const Index n = spec.states(), m = spec.controls();
  lp::Model model = lp::Model::with_variables(n + m);  // [x ≥ 0, u free]
  model.objective = lp::Objective::Minimize;
  model.cost << spec.s, spec.r;
  model.lower.tail(m).setConstant(-lp::kInfinity);
  Eigen::RowVectorXd row(n + m);
  for (Index i = 0; i < n; ++i) {
    row << spec.A.row(i), spec.B.row(i);
    model.add_row(row, lp::RowSense::LessEqual, -1.0);
  }
  for (Index j = 0; j < m; ++j) {
    Eigen::RowVectorXd unit = Eigen::RowVectorXd::Zero(m);
    unit(j) = 1.0;
    row << -spec.E.row(j), unit;
    model.add_row(row, lp::RowSense::LessEqual, 0.0);  // u_j ≤ E_j x
    row << spec.E.row(j), unit;
    model.add_row(row, lp::RowSense::GreaterEqual, 0.0);  // u_j ≥ −E_j x
  }
  return model;
}

PrimalLr solve_primal_lr(const Problem& spec) {
  require_disturbance_free(spec);
  const Index n = spec.states(), m = spec.controls();
  PrimalLr out;
  out.raw = lp::solve(build_primal_lr(spec));
  out.status = out.raw.status;
  if (out.status == lp::Status::Optimal) {
    out.p = out.raw.x.head(n);
    out.zeta = out.raw.x.tail(m);
    out.objective = out.raw.objective;
  } else if (out.status == lp::Status::Unbounded) {
    out.ray_p = out.raw.ray.head(n);
    const double scale = std::max(1e-300, out.ray_p.lpNorm<Eigen::Infinity>());
    for (Index i = 0; i < n; ++i)
      if (out.ray_p(i) > tol::lp * scale) out.unbounded_entries.push_back(i);
  }
  return out;
}

DualLr solve_dual_lr(const Problem& spec) {
  require_disturbance_free(spec);
  const Index n = spec.states(), m = spec.controls();
  DualLr out;
  out.raw = lp::solve(build_dual_lr(spec));
  out.status = out.raw.status;
  if (out.status == lp::Status::Optimal) {
    out.x = out.raw.x.head(n);
    out.u = out.raw.x.tail(m);
    out.objective = out.raw.objective;
  }
  return out;
}

ControllerSet extract_lp_controller(const Problem& spec, const Eigen::VectorXd& p,
                                   const std::optional<Eigen::VectorXd>& dual_u) {
  SignPattern base = control_signs(spec, p);
  if (dual_u) {
    if (dual_u->size() != spec.controls()) throw DimensionMismatch("u must have m entries");
    const double u_tol = tol::lp * (1.0 + dual_u->lpNorm<Eigen::Infinity>());
    for (Index i = 0; i < base.size(); ++i) {
      if (!base.tie(i) || std::abs((*dual_u)(i)) <= u_tol) continue;
      base.sign(i) = (*dual_u)(i) > 0 ? -1 : 1;
      base.tie(i) = false;
    }
  }

  ControllerSet out;
  std::vector<Eigen::VectorXi> patterns;
  if ((std::size_t{1} << std::min<Index>(base.tie_count(), 62)) > kMaxTieCombinations) {
    if (!dual_u)
      throw TieExplosion("more than 64 tie sign combinations and no dual optimizer to guide");
    out.tie_explosion = true;
    patterns.push_back(base.sign);
  } else {
    patterns = enumerate_tie_patterns(base);
  }

  for (const auto& sign : patterns) {
    ControllerCandidate c;
    c.sign = sign;
    c.K = feedback_gain(spec.E, sign);
    c.abscissa = spectral_abscissa(Eigen::MatrixXd(spec.A - spec.B * c.K));
    c.hurwitz = c.abscissa < -tol::eig;
    c.dual_guided = dual_u.has_value() && sign == base.sign;
    out.candidates.push_back(std::move(c));
  }
  return out;
}

Lemma1Report lemma1_equivalence_check(const Problem& spec) {
  require_disturbance_free(spec);
  Lemma1Report report;
  report.primal_bounded = solve_primal_lr(spec).status == lp::Status::Optimal;
  report.dual_feasible = solve_dual_lr(spec).status != lp::Status::Infeasible;

  const Index m = spec.controls();
  if (m > 12) throw InvalidArgument("sign grid search is limited to 12 control channels");
  long combos = 1;
  for (Index i = 0; i < m; ++i) combos *= 3;
  Eigen::VectorXi d(m);
  for (long code = 0; code < combos && !report.grid_hurwitz; ++code) {
    long rest = code;
    for (Index i = 0; i < m; ++i) {
      d(i) = static_cast<int>(rest % 3) - 1;
      rest /= 3;
    }
    const Eigen::MatrixXd closed = spec.A - spec.B * d.cast<double>().asDiagonal() * spec.E;
    if (spectral_abscissa(closed) < -tol::eig) {
      report.grid_hurwitz = true;
      report.grid_witness = d;
    }
  }
  return report;
}

LrLpOutcome solve_lr_lp(const Problem& spec) {
  LrLpOutcome out;
  out.primal = solve_primal_lr(spec);
  out.dual = solve_dual_lr(spec);
  if (out.primal.status == lp::Status::Optimal) {
    out.bellman_residual = bellman_residual(spec, out.primal.p);
    std::optional<Eigen::VectorXd> u;
    if (out.dual.status == lp::Status::Optimal) u = out.dual.u;
    out.controllers = extract_lp_controller(spec, out.primal.p, u);
  }
  return out;
}

}  // namespace poslr
