#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

#include "poslr/tolerances.hpp"

namespace poslr::lp {

using Eigen::Index;

enum class Objective { Minimize, Maximize };
enum class RowSense { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Unbounded, Infeasible };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// opt c'x  s.t.  a_i'x (≤,=,≥) b_i,  lower ≤ x ≤ upper.
struct Model {
  Objective objective = Objective::Minimize;
  Eigen::VectorXd cost;
  Eigen::MatrixXd constraints;
  std::vector<RowSense> senses;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;  // −inf allowed
  Eigen::VectorXd upper;  // +inf allowed

  /// `variables` columns, no rows, bounds 0 ≤ x < ∞, zero cost.
  static Model with_variables(Index variables);

  Index variables() const { return cost.size(); }
  Index rows() const { return constraints.rows(); }

  /// Appends one constraint row; `coefficients` must have variables() entries.
  void add_row(const Eigen::Ref<const Eigen::RowVectorXd>& coefficients,
               RowSense sense, double bound);
};

struct Options {
  double tolerance = tol::lp;
  // Consecutive degenerate pivots (times the row count) before switching
  // from Dantzig pricing to Bland's rule.
  int bland_after_degenerate_per_row = 50;
  int refactor_every = 64;
  int max_iterations = 50000;
};

struct Solution {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;       // primal values (Optimal)
  double objective = 0;    // in the model's own sense
  Eigen::VectorXd duals;   // d(objective)/d(rhs_i) per model row (Optimal)
  double dual_objective = 0;
  Eigen::VectorXd ray;     // improving direction in x-space (Unbounded)
  Eigen::VectorXd farkas;  // phase-1 row prices (Infeasible)
  std::vector<Index> basis;  // basic columns of the internal standard form
  int iterations = 0;
  bool used_bland = false;

  // Diagnostics filled at Optimal.
  double primal_residual = 0;        // worst row/bound violation
  double reduced_cost_violation = 0; // worst wrong-signed reduced cost
};

Solution solve(const Model& model, const Options& options = {});

/// Plain-text tabular listing of the model, for debugging.
std::string dump(const Model& model);

const char* to_string(Status status);

}  // namespace poslr::lp
