#include "poslr/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "poslr/errors.hpp"

namespace poslr::lp {

Model Model::with_variables(Index variables) {
  Model m;
  m.cost = Eigen::VectorXd::Zero(variables);
  m.constraints.resize(0, variables);
  m.lower = Eigen::VectorXd::Zero(variables);
  m.upper = Eigen::VectorXd::Constant(variables, kInfinity);
  return m;
}

void Model::add_row(const Eigen::Ref<const Eigen::RowVectorXd>& coefficients,
                    RowSense sense, double bound) {
  if (coefficients.size() != variables())
    throw DimensionMismatch("LP row width differs from variable count");
  constraints.conservativeResize(rows() + 1, variables());
  constraints.row(rows() - 1) = coefficients;
  senses.push_back(sense);
  rhs.conservativeResize(rhs.size() + 1);
  rhs(rhs.size() - 1) = bound;
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Unbounded: return "unbounded";
    case Status::Infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

struct Term {
  Index column;
  double coefficient;
};

// min c'y  s.t.  Ay = b,  y ≥ 0,  b ≥ 0, with x = shift + Σ terms.
struct StandardForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<std::vector<Term>> terms;
  Eigen::VectorXd shift;
  std::vector<double> row_sign;
  std::vector<Index> initial_basis;
  Index first_artificial = 0;
  double sense_sign = 1.0;  // −1 for maximization
};

void check_model(const Model& m) {
  const Index nv = m.variables();
  if (m.constraints.cols() != nv || m.rhs.size() != m.rows() ||
      static_cast<Index>(m.senses.size()) != m.rows() || m.lower.size() != nv ||
      m.upper.size() != nv)
    throw DimensionMismatch("inconsistent LP model dimensions");
}

StandardForm standardize(const Model& model) {
  check_model(model);
  StandardForm sf;
  const Index nv = model.variables();
  sf.sense_sign = model.objective == Objective::Maximize ? -1.0 : 1.0;
  sf.terms.resize(static_cast<std::size_t>(nv));
  sf.shift = Eigen::VectorXd::Zero(nv);

  Index columns = 0;
  struct UpperRow {
    Index column;
    double bound;
  };
  std::vector<UpperRow> upper_rows;
  for (Index j = 0; j < nv; ++j) {
    const double lo = model.lower(j), hi = model.upper(j);
    auto& t = sf.terms[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      sf.shift(j) = lo;
      t.push_back({columns, 1.0});
      if (std::isfinite(hi)) upper_rows.push_back({columns, hi - lo});
      ++columns;
    } else if (std::isfinite(hi)) {
      sf.shift(j) = hi;
      t.push_back({columns++, -1.0});
    } else {
      t.push_back({columns++, 1.0});
      t.push_back({columns++, -1.0});
    }
  }
  const Index structural = columns;
  const Index m0 = model.rows();
  const Index rows = m0 + static_cast<Index>(upper_rows.size());

  Index slacks = 0;
  for (auto s : model.senses) slacks += (s != RowSense::Equal);
  slacks += static_cast<Index>(upper_rows.size());

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, structural + slacks);
  Eigen::VectorXd b(rows);
  std::vector<Index> slack_of_row(static_cast<std::size_t>(rows), -1);
  std::vector<double> slack_coef(static_cast<std::size_t>(rows), 0.0);

  Index slack_col = structural;
  for (Index i = 0; i < m0; ++i) {
    double rhs = model.rhs(i);
    for (Index j = 0; j < nv; ++j) {
      const double a = model.constraints(i, j);
      if (a == 0.0) continue;
      rhs -= a * sf.shift(j);
      for (const Term& t : sf.terms[static_cast<std::size_t>(j)])
        A(i, t.column) += a * t.coefficient;
    }
    b(i) = rhs;
    const RowSense sense = model.senses[static_cast<std::size_t>(i)];
    if (sense != RowSense::Equal) {
      const double coef = sense == RowSense::LessEqual ? 1.0 : -1.0;
      A(i, slack_col) = coef;
      slack_of_row[static_cast<std::size_t>(i)] = slack_col;
      slack_coef[static_cast<std::size_t>(i)] = coef;
      ++slack_col;
    }
  }
  for (std::size_t k = 0; k < upper_rows.size(); ++k) {
    const Index i = m0 + static_cast<Index>(k);
    A(i, upper_rows[k].column) = 1.0;
    A(i, slack_col) = 1.0;
    b(i) = upper_rows[k].bound;
    slack_of_row[static_cast<std::size_t>(i)] = slack_col;
    slack_coef[static_cast<std::size_t>(i)] = 1.0;
    ++slack_col;
  }

  sf.row_sign.assign(static_cast<std::size_t>(rows), 1.0);
  for (Index i = 0; i < rows; ++i) {
    if (b(i) < 0) {
      A.row(i) *= -1.0;
      b(i) = -b(i);
      sf.row_sign[static_cast<std::size_t>(i)] = -1.0;
      slack_coef[static_cast<std::size_t>(i)] *= -1.0;
    }
  }

  // Rows whose slack enters with +1 start with the slack basic; the rest get
  // an artificial column.
  sf.first_artificial = A.cols();
  std::vector<Index> artificial_rows;
  sf.initial_basis.resize(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) {
    if (slack_coef[static_cast<std::size_t>(i)] > 0) {
      sf.initial_basis[static_cast<std::size_t>(i)] =
          slack_of_row[static_cast<std::size_t>(i)];
    } else {
      artificial_rows.push_back(i);
    }
  }
  const Index n_art = static_cast<Index>(artificial_rows.size());
  sf.A = Eigen::MatrixXd::Zero(rows, A.cols() + n_art);
  sf.A.leftCols(A.cols()) = A;
  for (Index k = 0; k < n_art; ++k) {
    const Index i = artificial_rows[static_cast<std::size_t>(k)];
    sf.A(i, sf.first_artificial + k) = 1.0;
    sf.initial_basis[static_cast<std::size_t>(i)] = sf.first_artificial + k;
  }
  sf.b = b;

  sf.c = Eigen::VectorXd::Zero(sf.A.cols());
  for (Index j = 0; j < nv; ++j)
    for (const Term& t : sf.terms[static_cast<std::size_t>(j)])
      sf.c(t.column) += sf.sense_sign * model.cost(j) * t.coefficient;
  return sf;
}

enum class PhaseResult { Optimal, Unbounded };

class RevisedSimplex {
 public:
  RevisedSimplex(const StandardForm& sf, const Options& opt)
      : sf_(sf), opt_(opt), rows_(sf.A.rows()), cols_(sf.A.cols()) {
    basis_ = sf.initial_basis;
    is_basic_.assign(static_cast<std::size_t>(cols_), false);
    for (Index j : basis_) is_basic_[static_cast<std::size_t>(j)] = true;
    refactor();
  }

  // Phase 2 passes protect_artificials: artificials still basic at zero
  // must stay there.
  PhaseResult run(const Eigen::VectorXd& costs, bool allow_artificial_entry,
                  bool protect_artificials = false) {
    protect_artificials_ = protect_artificials;
    degenerate_run_ = 0;
    bland_ = false;
    while (true) {
      if (iterations_ >= opt_.max_iterations)
        throw NumericalBreakdown("simplex iteration limit reached");
      if (since_refactor_ >= opt_.refactor_every) refactor();

      const Eigen::VectorXd prices = row_prices(costs);
      const Index entering = choose_entering(costs, prices, allow_artificial_entry);
      if (entering < 0) return PhaseResult::Optimal;

      const Eigen::VectorXd alpha = binv_ * sf_.A.col(entering);
      double theta = 0;
      const Index leaving = choose_leaving(alpha, theta);
      if (leaving < 0) {
        ray_column_ = entering;
        ray_alpha_ = alpha;
        return PhaseResult::Unbounded;
      }
      pivot(entering, leaving, alpha, theta);
    }
  }

  // Pivots zero-level artificials out of the basis where a structural or
  // slack column can replace them; rows with no such column are redundant.
  void drive_out_artificials() {
    for (Index i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < sf_.first_artificial) continue;
      const Eigen::RowVectorXd row = binv_.row(i) * sf_.A.leftCols(sf_.first_artificial);
      Index best = -1;
      double best_abs = 1e-7;
      for (Index j = 0; j < sf_.first_artificial; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)]) continue;
        if (std::abs(row(j)) > best_abs) {
          best_abs = std::abs(row(j));
          best = j;
        }
      }
      if (best >= 0) {
        const Eigen::VectorXd alpha = binv_ * sf_.A.col(best);
        pivot(best, i, alpha, 0.0);
      }
    }
  }

  Eigen::VectorXd row_prices(const Eigen::VectorXd& costs) const {
    Eigen::VectorXd cb(rows_);
    for (Index i = 0; i < rows_; ++i) cb(i) = costs(basis_[static_cast<std::size_t>(i)]);
    return binv_.transpose() * cb;
  }

  Eigen::VectorXd values() const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
    for (Index i = 0; i < rows_; ++i)
      y(basis_[static_cast<std::size_t>(i)]) = std::max(0.0, xb_(i));
    return y;
  }

  Eigen::VectorXd ray() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(cols_);
    d(ray_column_) = 1.0;
    for (Index i = 0; i < rows_; ++i)
      d(basis_[static_cast<std::size_t>(i)]) -= ray_alpha_(i);
    return d;
  }

  const std::vector<Index>& basis() const { return basis_; }
  int iterations() const { return iterations_; }
  bool used_bland() const { return ever_bland_; }

 private:
  void refactor() {
    since_refactor_ = 0;
    if (rows_ == 0) {
      binv_.resize(0, 0);
      xb_.resize(0);
      return;
    }
    Eigen::MatrixXd basis_matrix(rows_, rows_);
    for (Index i = 0; i < rows_; ++i)
      basis_matrix.col(i) = sf_.A.col(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
      std::ostringstream os;
      os << "singular simplex basis (rcond " << rcond << ")";
      throw NumericalBreakdown(os.str());
    }
    binv_ = lu.inverse();
    xb_ = binv_ * sf_.b;
  }

  Index choose_entering(const Eigen::VectorXd& costs, const Eigen::VectorXd& prices,
                        bool allow_artificial_entry) const {
    const Index limit = allow_artificial_entry ? cols_ : sf_.first_artificial;
    Index best = -1;
    double best_value = -opt_.tolerance;
    for (Index j = 0; j < limit; ++j) {
      if (is_basic_[static_cast<std::size_t>(j)]) continue;
      const double reduced = costs(j) - prices.dot(sf_.A.col(j));
      if (reduced < best_value) {
        best = j;
        if (bland_) return best;
        best_value = reduced;
      }
    }
    return best;
  }

  Index choose_leaving(const Eigen::VectorXd& alpha, double& theta) const {
    constexpr double pivot_tol = 1e-9;
    Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < rows_; ++i) {
      const Index col = basis_[static_cast<std::size_t>(i)];
      double ratio;
      if (protect_artificials_ && col >= sf_.first_artificial &&
          std::abs(alpha(i)) > pivot_tol) {
        // An artificial left basic at zero must not move off zero.
        ratio = 0.0;
      } else if (alpha(i) > pivot_tol) {
        ratio = std::max(0.0, xb_(i)) / alpha(i);
      } else {
        continue;
      }
      if (leaving < 0 || ratio < best_ratio - 1e-12) {
        leaving = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12) {
        const Index current = basis_[static_cast<std::size_t>(leaving)];
        const bool better = bland_ ? col < current
                                   : std::abs(alpha(i)) > std::abs(alpha(leaving));
        if (better) {
          leaving = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    theta = best_ratio;
    return leaving;
  }

  void pivot(Index entering, Index leaving, const Eigen::VectorXd& alpha, double theta) {
    if (std::abs(theta) <= opt_.tolerance) {
      if (++degenerate_run_ >= opt_.bland_after_degenerate_per_row * std::max<Index>(rows_, 1)) {
        bland_ = true;
        ever_bland_ = true;
      }
    } else {
      degenerate_run_ = 0;
    }
    xb_ -= theta * alpha;
    xb_(leaving) = theta;

    const Eigen::RowVectorXd pivot_row = binv_.row(leaving) / alpha(leaving);
    binv_.noalias() -= alpha * pivot_row;
    binv_.row(leaving) = pivot_row;

    is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(leaving)])] = false;
    basis_[static_cast<std::size_t>(leaving)] = entering;
    is_basic_[static_cast<std::size_t>(entering)] = true;
    ++iterations_;
    ++since_refactor_;
  }

  const StandardForm& sf_;
  const Options& opt_;
  Index rows_, cols_;
  std::vector<Index> basis_;
  std::vector<bool> is_basic_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  int iterations_ = 0;
  int since_refactor_ = 0;
  Index degenerate_run_ = 0;
  bool bland_ = false;
  bool protect_artificials_ = false;
  bool ever_bland_ = false;
  Index ray_column_ = -1;
  Eigen::VectorXd ray_alpha_;
};

Eigen::VectorXd to_model_space(const StandardForm& sf, const Eigen::VectorXd& y,
                               bool with_shift) {
  Eigen::VectorXd x = with_shift ? sf.shift : Eigen::VectorXd::Zero(sf.shift.size());
  for (std::size_t j = 0; j < sf.terms.size(); ++j)
    for (const Term& t : sf.terms[j]) x(static_cast<Index>(j)) += t.coefficient * y(t.column);
  return x;
}

double primal_violation(const Model& model, const Eigen::VectorXd& x) {
  double worst = 0;
  const Eigen::VectorXd lhs = model.constraints * x;
  for (Index i = 0; i < model.rows(); ++i) {
    const double d = lhs(i) - model.rhs(i);
    switch (model.senses[static_cast<std::size_t>(i)]) {
      case RowSense::LessEqual: worst = std::max(worst, d); break;
      case RowSense::GreaterEqual: worst = std::max(worst, -d); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(d)); break;
    }
  }
  for (Index j = 0; j < model.variables(); ++j) {
    worst = std::max(worst, model.lower(j) - x(j));
    worst = std::max(worst, x(j) - model.upper(j));
  }
  return worst;
}

}  // namespace

Solution solve(const Model& model, const Options& options) {
  const StandardForm sf = standardize(model);
  RevisedSimplex simplex(sf, options);
  Solution sol;
  const Index rows = sf.A.rows();
  const Index orig_rows = model.rows();

  // Phase 1: minimize the sum of artificials.
  if (sf.first_artificial < sf.A.cols()) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(sf.A.cols());
    phase1.tail(sf.A.cols() - sf.first_artificial).setOnes();
    simplex.run(phase1, false);
    const Eigen::VectorXd y = simplex.values();
    const double infeasibility = phase1.dot(y);
    if (infeasibility > options.tolerance * (1.0 + sf.b.lpNorm<Eigen::Infinity>())) {
      sol.status = Status::Infeasible;
      const Eigen::VectorXd prices = simplex.row_prices(phase1);
      sol.farkas.resize(orig_rows);
      for (Index i = 0; i < orig_rows; ++i)
        sol.farkas(i) = prices(i) * sf.row_sign[static_cast<std::size_t>(i)];
      sol.iterations = simplex.iterations();
      sol.basis = simplex.basis();
      sol.used_bland = simplex.used_bland();
      return sol;
    }
    simplex.drive_out_artificials();
  }

  // Phase 2.
  const PhaseResult result = simplex.run(sf.c, false, true);
  sol.iterations = simplex.iterations();
  sol.basis = simplex.basis();
  sol.used_bland = simplex.used_bland();
  if (result == PhaseResult::Unbounded) {
    sol.status = Status::Unbounded;
    sol.ray = to_model_space(sf, simplex.ray(), false);
    return sol;
  }

  sol.status = Status::Optimal;
  const Eigen::VectorXd y = simplex.values();
  sol.x = to_model_space(sf, y, true);
  sol.objective = model.cost.dot(sol.x);

  const Eigen::VectorXd prices = simplex.row_prices(sf.c);
  const double offset = model.cost.dot(sf.shift);
  sol.dual_objective = offset + sf.sense_sign * sf.b.dot(prices);
  sol.duals.resize(orig_rows);
  for (Index i = 0; i < orig_rows; ++i)
    sol.duals(i) = sf.sense_sign * prices(i) * sf.row_sign[static_cast<std::size_t>(i)];

  double violation = 0;
  for (Index j = 0; j < sf.first_artificial; ++j)
    violation = std::max(violation, -(sf.c(j) - prices.dot(sf.A.col(j))));
  sol.reduced_cost_violation = violation;
  sol.primal_residual = primal_violation(model, sol.x);
  (void)rows;
  return sol;
}

std::string dump(const Model& model) {
  check_model(model);
  std::ostringstream os;
  os << (model.objective == Objective::Minimize ? "minimize" : "maximize") << '\n';
  os << std::setprecision(6);
  os << "cost";
  for (Index j = 0; j < model.variables(); ++j) os << '\t' << model.cost(j);
  os << '\n';
  for (Index i = 0; i < model.rows(); ++i) {
    os << "row" << i;
    for (Index j = 0; j < model.variables(); ++j) os << '\t' << model.constraints(i, j);
    const RowSense s = model.senses[static_cast<std::size_t>(i)];
    os << '\t' << (s == RowSense::LessEqual ? "<=" : s == RowSense::Equal ? "=" : ">=");
    os << '\t' << model.rhs(i) << '\n';
  }
  os << "lower";
  for (Index j = 0; j < model.variables(); ++j) os << '\t' << model.lower(j);
  os << "\nupper";
  for (Index j = 0; j < model.variables(); ++j) os << '\t' << model.upper(j);
  os << '\n';
  return os.str();
}

}  // namespace poslr::lp
