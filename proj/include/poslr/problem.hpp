#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "poslr/errors.hpp"
#include "poslr/tolerances.hpp"

namespace poslr {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::Index;

/// Problem horizon: a finite final time T > 0, or the infinite horizon.
template <typename Scalar>
class Horizon {
 public:
  static Horizon finite(Scalar final_time) { return Horizon(final_time); }
  static Horizon infinite() { return Horizon(); }

  bool is_finite() const { return final_time_.has_value(); }
  Scalar final_time() const {
    if (!final_time_) throw InvalidArgument("infinite horizon has no final time");
    return *final_time_;
  }

  bool operator==(const Horizon&) const = default;

 private:
  Horizon() = default;
  explicit Horizon(Scalar t) : final_time_(t) {}
  std::optional<Scalar> final_time_;
};

/// Data of the minimax linear-regulator problem
///
///   inf_u sup_{w,v} ∫ s'x + r'u − gamma'w − delta'v dt
///   x' = Ax + Bu + Fw + Hv,  |u| ≤ Ex,  w ≥ 0,  |v| ≤ Gx,  x(0) = x0.
///
/// Dimensions: A n×n, B n×m, F n×l, H n×c, E m×n, G c×n. The disturbance
/// blocks may have zero width (l = 0 or c = 0).
template <typename Scalar>
struct ProblemSpec {
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  Matrix A, B, F, H, E, G;
  Vector s, r, gamma, delta, x0;
  Horizon<Scalar> horizon = Horizon<Scalar>::infinite();

  Index states() const { return A.rows(); }
  Index controls() const { return B.cols(); }
  Index rain_channels() const { return F.cols(); }
  Index bounded_disturbances() const { return H.cols(); }

  /// Fills absent disturbance blocks with zero-width matrices of the right
  /// height so every field is dimensionally meaningful.
  void normalize_empty_blocks() {
    const Index n = A.rows();
    if (F.size() == 0) F.resize(n, F.cols());
    if (gamma.size() == 0) gamma.resize(F.cols());
    if (H.size() == 0 && G.size() == 0) {
      const Index c = std::max(H.cols(), G.rows());
      H = Matrix::Zero(n, c);
      G = Matrix::Zero(c, n);
    }
    if (delta.size() == 0) delta = Vector::Zero(H.cols());
    if (x0.size() == 0) x0 = Vector::Zero(n);
  }

  bool operator==(const ProblemSpec& o) const {
    auto same = [](const auto& a, const auto& b) {
      return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
    };
    return same(A, o.A) && same(B, o.B) && same(F, o.F) && same(H, o.H) &&
           same(E, o.E) && same(G, o.G) && same(s, o.s) && same(r, o.r) &&
           same(gamma, o.gamma) && same(delta, o.delta) && same(x0, o.x0) &&
           horizon == o.horizon;
  }
};

using Problem = ProblemSpec<double>;

template <typename Scalar>
struct ValidationReport {
  bool metzler_ok = false;
  // Minimum off-diagonal entry of A − |B|E; +inf when n = 1.
  Scalar metzler_margin = 0;
  bool cost_condition_ok = false;
  // s − E'|r| + G'|delta|
  VectorX<Scalar> cost_margin;
  std::vector<std::string> messages;

  bool ok() const { return metzler_ok && cost_condition_ok; }
};

namespace detail {

inline void expect_dim(bool cond, const std::string& what) {
  if (!cond) throw DimensionMismatch(what);
}

template <typename Derived>
void expect_nonnegative(const Eigen::DenseBase<Derived>& m, const char* name) {
  if (m.size() == 0) return;
  const auto lowest = m.minCoeff();
  if (lowest < -tol::metzler) {
    std::ostringstream os;
    os << name << " has a negative entry (" << lowest << ")";
    throw NegativeEntry(os.str());
  }
}

}  // namespace detail

/// Throws DimensionMismatch unless every block agrees with n, m, l, c.
template <typename Scalar>
void check_dimensions(const ProblemSpec<Scalar>& spec) {
  using detail::expect_dim;
  const Index n = spec.A.rows();
  const Index m = spec.B.cols();
  const Index l = spec.F.cols();
  const Index c = spec.H.cols();
  expect_dim(n > 0, "A must be non-empty");
  expect_dim(spec.A.cols() == n, "A must be square");
  expect_dim(spec.B.rows() == n, "B must have n rows");
  expect_dim(spec.F.rows() == n, "F must have n rows");
  expect_dim(spec.H.rows() == n, "H must have n rows");
  expect_dim(spec.E.rows() == m && spec.E.cols() == n, "E must be m×n");
  expect_dim(spec.G.rows() == c && spec.G.cols() == n, "G must be c×n");
  expect_dim(spec.s.size() == n, "s must have n entries");
  expect_dim(spec.r.size() == m, "r must have m entries");
  expect_dim(spec.gamma.size() == l, "gamma must have l entries");
  expect_dim(spec.delta.size() == c, "delta must have c entries");
  expect_dim(spec.x0.size() == n, "x0 must have n entries");
  if (spec.horizon.is_finite())
    expect_dim(spec.horizon.final_time() > 0, "finite horizon must be positive");
}

/// A − |B|E, the most-negative closed loop the control constraint permits.
template <typename Scalar>
MatrixX<Scalar> worst_control_matrix(const ProblemSpec<Scalar>& spec) {
  return spec.A - spec.B.cwiseAbs() * spec.E;
}

template <typename Derived>
typename Derived::Scalar off_diagonal_min(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  Scalar lowest = std::numeric_limits<Scalar>::infinity();
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < M.rows(); ++i)
      if (i != j) lowest = std::min(lowest, M(i, j));
  return lowest;
}

template <typename Derived>
bool is_metzler(const Eigen::MatrixBase<Derived>& M,
                typename Derived::Scalar tolerance = tol::metzler) {
  return off_diagonal_min(M) >= -tolerance;
}

/// Checks the standing hypotheses: A − |B|E Metzler and
/// s ≥ E'|r| − G'|delta|. Structural problems (shapes, signs of the
/// nonnegative data, zero rows of E) throw instead of reporting.
template <typename Scalar>
ValidationReport<Scalar> validate(const ProblemSpec<Scalar>& spec) {
  check_dimensions(spec);
  detail::expect_nonnegative(spec.F, "F");
  detail::expect_nonnegative(spec.E, "E");
  detail::expect_nonnegative(spec.G, "G");
  detail::expect_nonnegative(spec.gamma, "gamma");
  detail::expect_nonnegative(spec.x0, "x0");
  for (Index i = 0; i < spec.E.rows(); ++i) {
    if (!(spec.E.row(i).maxCoeff() > Scalar(0))) {
      std::ostringstream os;
      os << "E row " << i << " has no strictly positive entry";
      throw NegativeEntry(os.str());
    }
  }

  ValidationReport<Scalar> report;
  report.metzler_margin = off_diagonal_min(worst_control_matrix(spec));
  report.metzler_ok = report.metzler_margin >= -tol::metzler;
  if (!report.metzler_ok)
    report.messages.push_back("A - |B|E is not Metzler");

  report.cost_margin = spec.s - spec.E.transpose() * spec.r.cwiseAbs() +
                       spec.G.transpose() * spec.delta.cwiseAbs();
  report.cost_condition_ok = report.cost_margin.minCoeff() >= -tol::metzler;
  if (!report.cost_condition_ok)
    report.messages.push_back("s >= E'|r| - G'|delta| is violated");
  return report;
}

/// validate() that throws ValidationFailed when a gate fails.
template <typename Scalar>
void require_valid(const ProblemSpec<Scalar>& spec) {
  const auto report = validate(spec);
  if (report.ok()) return;
  std::string msg = "problem fails the standing hypotheses:";
  for (const auto& m : report.messages) msg += " " + m + ";";
  throw ValidationFailed(msg);
}

}  // namespace poslr
