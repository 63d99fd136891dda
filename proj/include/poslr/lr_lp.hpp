#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "poslr/lp.hpp"
#include "poslr/metzler.hpp"
#include "poslr/problem.hpp"

namespace poslr {

// Linear programs for the disturbance-free regulator (H = G' = 0):
//
//   primal:  max 1'p  s.t. A'p ≥ E'ζ − s,  −ζ ≤ r + B'p ≤ ζ,  p ≥ 0, ζ ≥ 0
//   dual:    min s'x + r'u  s.t. Ax + Bu ≤ −1,  −Ex ≤ u ≤ Ex,  x ≥ 0

struct PrimalLr {
  lp::Status status = lp::Status::Infeasible;
  Eigen::VectorXd p, zeta;  // Optimal
  double objective = 0;
  Eigen::VectorXd ray_p;    // Unbounded: p-part of the improving ray
  std::vector<Index> unbounded_entries;  // entries of p the ray drives
  lp::Solution raw;
};

struct DualLr {
  lp::Status status = lp::Status::Infeasible;
  Eigen::VectorXd x, u;  // Optimal
  double objective = 0;
  lp::Solution raw;
};

struct ControllerCandidate {
  Eigen::VectorXi sign;  // K = diag(sign)E
  Eigen::MatrixXd K;
  bool hurwitz = false;
  double abscissa = 0;
  bool dual_guided = false;
};

struct ControllerSet {
  std::vector<ControllerCandidate> candidates;
  bool tie_explosion = false;

  bool any_hurwitz() const;
};

struct Lemma1Report {
  bool primal_bounded = false;
  bool dual_feasible = false;
  bool grid_hurwitz = false;
  std::optional<Eigen::VectorXi> grid_witness;  // diagonal of D, entries in {−1, 0, 1}
  bool agree() const { return primal_bounded == dual_feasible && dual_feasible == grid_hurwitz; }
};

struct LrLpOutcome {
  PrimalLr primal;
  DualLr dual;
  double bellman_residual = 0;  // of the primal p, when Optimal
  ControllerSet controllers;    // when the primal is Optimal
};

/// Maximum number of sign patterns enumerated over tie channels.
inline constexpr std::size_t kMaxTieCombinations = 64;

lp::Model build_primal_lr(const Problem& spec);
lp::Model build_dual_lr(const Problem& spec);

PrimalLr solve_primal_lr(const Problem& spec);
DualLr solve_dual_lr(const Problem& spec);

/// Bang-bang controllers from a primal optimizer p. Non-tie channels take
/// sign(r_i + B_i'p); tie channels follow the dual optimizer when given
/// (u* = −Kx*, so σ_i = −sign(u*_i)), otherwise both signs are enumerated.
ControllerSet extract_lp_controller(const Problem& spec, const Eigen::VectorXd& p,
                                   const std::optional<Eigen::VectorXd>& dual_u = std::nullopt);

/// Primal boundedness, dual feasibility and a brute-force search for a
/// Hurwitz A − BDE over diagonal D ∈ {−1, 0, 1}^m, each evaluated
/// independently.
Lemma1Report lemma1_equivalence_check(const Problem& spec);

/// Primal, dual, residual and controllers in one pass.
LrLpOutcome solve_lr_lp(const Problem& spec);

}  // namespace poslr
