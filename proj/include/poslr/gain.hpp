#pragma once

#include <Eigen/Dense>

#include "poslr/infinite_horizon.hpp"
#include "poslr/problem.hpp"

namespace poslr {

struct L1GainReport {
  Eigen::VectorXd gamma_star;  // F'p(0) or F'p, one entry per w channel
  double gamma_star_max = 0;   // the scalar threshold γ with gamma = γ1
  // gamma ≥ γ* elementwise: the minimax value equals the value without w.
  // Otherwise the supremum over w ≥ 0 is unbounded.
  bool admissible = true;
  Eigen::VectorXd margin;  // gamma − γ*
  // The l1-induced gain reading holds only without the v channel.
  bool l1_interpretation = false;
  bool finite_horizon = false;
};

/// γ* = F'p(0) for a finite horizon (RK4 with `steps`, 0 for the default)
/// or F'p for the infinite one (value iteration). F does not enter the
/// value equation, so p is computed from the remaining data.
L1GainReport min_l1_gain(const Problem& spec, Index steps = 0,
                         const ValueIterationOptions& options = {});

/// γ* from an already computed value vector.
L1GainReport l1_gain_from_value(const Problem& spec, const Eigen::VectorXd& p);

}  // namespace poslr
