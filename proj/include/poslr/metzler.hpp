#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "poslr/errors.hpp"
#include "poslr/problem.hpp"
#include "poslr/tolerances.hpp"

namespace poslr {

template <typename Scalar>
struct EigenPair {
  Scalar lambda = 0;
  VectorX<Scalar> v;   // max-norm 1, nonnegative
  Scalar residual = 0; // ‖Mv − λv‖∞
};

/// Strongly connected components of the graph with an edge i → j whenever
/// M(i, j) > 0, i ≠ j. Components come out in reverse topological order
/// (a component only has edges into components listed before it).
template <typename Derived>
std::vector<std::vector<Index>> strongly_connected_components(
    const Eigen::MatrixBase<Derived>& M) {
  const Index n = M.rows();
  std::vector<Index> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack;
  std::vector<std::vector<Index>> components;
  Index counter = 0;

  // Iterative Tarjan: frames hold (vertex, next neighbour to examine).
  std::vector<std::pair<Index, Index>> frames;
  auto at = [](auto& vec, Index i) -> auto& { return vec[static_cast<std::size_t>(i)]; };
  for (Index root = 0; root < n; ++root) {
    if (at(index, root) >= 0) continue;
    frames.push_back({root, 0});
    at(index, root) = at(low, root) = counter++;
    stack.push_back(root);
    at(on_stack, root) = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      bool descended = false;
      while (next < n) {
        const Index w = next++;
        if (w == v || !(M(v, w) > 0)) continue;
        if (at(index, w) < 0) {
          at(index, w) = at(low, w) = counter++;
          stack.push_back(w);
          at(on_stack, w) = true;
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (at(on_stack, w)) at(low, v) = std::min(at(low, v), at(index, w));
      }
      if (descended) continue;
      const Index vertex = v;
      if (at(low, vertex) == at(index, vertex)) {
        std::vector<Index> component;
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          at(on_stack, w) = false;
          component.push_back(w);
        } while (w != vertex);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      frames.pop_back();
      if (!frames.empty()) {
        const Index parent = frames.back().first;
        at(low, parent) = std::min(at(low, parent), at(low, vertex));
      }
    }
  }
  return components;
}

template <typename Scalar>
struct PerronResult {
  Scalar root = 0;
  VectorX<Scalar> vector;  // strictly positive, max-norm 1
  Scalar bracket_width = 0;
  int iterations = 0;
};

/// Perron root and vector of an irreducible Metzler matrix.
///
/// Power iteration on M + σI, σ = max|M_ii| + 1, which is nonnegative with a
/// positive diagonal and therefore primitive. For a positive iterate v the
/// Collatz–Wielandt ratios min_i (Qv)_i/v_i ≤ ρ ≤ max_i (Qv)_i/v_i bracket the
/// root; once the bracket is narrow the iteration switches to inverse
/// iteration shifted just above the upper bound, which keeps (μI − Q)^{-1}
/// nonnegative.
template <typename Derived>
PerronResult<typename Derived::Scalar> perron_root_irreducible(
    const Eigen::MatrixBase<Derived>& M, int max_iterations = 100000) {
  using Scalar = typename Derived::Scalar;
  using Vector = VectorX<Scalar>;
  using Matrix = MatrixX<Scalar>;
  const Index n = M.rows();
  PerronResult<Scalar> out;
  if (n == 1) {
    out.root = M(0, 0);
    out.vector = Vector::Ones(1);
    return out;
  }
  const Scalar sigma = M.diagonal().cwiseAbs().maxCoeff() + Scalar(1);
  const Matrix Q = M + sigma * Matrix::Identity(n, n);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();

  Vector v = Vector::Ones(n);
  Scalar lo = 0, hi = 0;
  auto bracket = [&](const Vector& x) {
    const Vector w = Q * x;
    lo = std::numeric_limits<Scalar>::infinity();
    hi = -lo;
    for (Index i = 0; i < n; ++i) {
      const Scalar ratio = w(i) / x(i);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    return w;
  };
  auto target = [&]() { return Scalar(1e-13) * (Scalar(1) + std::abs(hi)); };

  int it = 0;
  int inverse_failures = 0;
  while (it < max_iterations) {
    Vector w = bracket(v);
    ++it;
    if (hi - lo <= target()) break;
    if (hi - lo <= Scalar(1e-3) * (Scalar(1) + std::abs(hi)) && inverse_failures < 3) {
      // Shifted inverse steps; fall back to plain power iteration if the
      // bracket stops shrinking.
      const Scalar before = hi - lo;
      for (int k = 0; k < 8 && it < max_iterations; ++k) {
        const Scalar shift = hi + std::max(hi - lo, Scalar(64) * eps * (Scalar(1) + std::abs(hi)));
        Eigen::PartialPivLU<Matrix> lu(shift * Matrix::Identity(n, n) - Q);
        Vector z = lu.solve(v);
        if (!z.allFinite() || z.minCoeff() <= Scalar(0)) break;
        v = z / z.maxCoeff();
        bracket(v);
        ++it;
        if (hi - lo <= target()) break;
      }
      if (hi - lo <= target()) break;
      if (!(hi - lo < Scalar(0.5) * before)) ++inverse_failures;
      continue;
    }
    v = w / w.maxCoeff();
  }
  out.iterations = it;
  out.bracket_width = hi - lo;
  if (hi - lo > Scalar(1e-9) * (Scalar(1) + std::abs(hi))) {
    std::ostringstream os;
    os << "Perron iteration did not converge: estimate " << (lo + hi) / 2 - sigma
       << ", bracket width " << hi - lo;
    throw NoConvergence(os.str());
  }
  out.root = (lo + hi) / Scalar(2) - sigma;
  out.vector = v / v.maxCoeff();
  return out;
}

namespace detail {

template <typename Derived>
MatrixX<typename Derived::Scalar> submatrix(const Eigen::MatrixBase<Derived>& M,
                                            const std::vector<Index>& rows,
                                            const std::vector<Index>& cols) {
  MatrixX<typename Derived::Scalar> out(static_cast<Index>(rows.size()),
                                        static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = M(rows[i], cols[j]);
  return out;
}

template <typename Derived>
void require_metzler(const Eigen::MatrixBase<Derived>& M, const char* what) {
  if (M.rows() != M.cols()) throw DimensionMismatch(std::string(what) + ": matrix must be square");
  if (!is_metzler(M)) throw InvalidArgument(std::string(what) + ": matrix is not Metzler");
}

}  // namespace detail

/// Spectral abscissa of a Metzler matrix, which is its Perron root: the
/// maximum over irreducible classes of the class Perron roots.
template <typename Derived>
typename Derived::Scalar spectral_abscissa(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  detail::require_metzler(M, "spectral_abscissa");
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  for (const auto& component : strongly_connected_components(M)) {
    if (component.size() == 1) {
      best = std::max(best, Scalar(M(component[0], component[0])));
      continue;
    }
    best = std::max(best,
                    perron_root_irreducible(detail::submatrix(M, component, component)).root);
  }
  return best;
}

/// Nonnegative eigenvectors built from the Frobenius normal form.
///
/// A class κ with Perron root ρ carries an extremal nonnegative eigenvector
/// exactly when every other class with access to κ has a smaller root. The
/// vector is the class Perron vector on κ, (ρI − M_UU)^{-1} M_Uκ v_κ on the
/// set U of classes with access to κ, and zero elsewhere.
template <typename Derived>
std::vector<EigenPair<typename Derived::Scalar>> distinguished_eigenpairs(
    const Eigen::MatrixBase<Derived>& M, typename Derived::Scalar lambda_floor) {
  using Scalar = typename Derived::Scalar;
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;
  detail::require_metzler(M, "distinguished_eigenpairs");
  const Index n = M.rows();
  const Scalar scale = std::max(Scalar(1), M.cwiseAbs().rowwise().sum().maxCoeff());
  const Scalar tol = Scalar(tol::eig) * scale;

  const auto components = strongly_connected_components(M);
  const std::size_t k = components.size();
  std::vector<Index> owner(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < k; ++c)
    for (Index i : components[c]) owner[static_cast<std::size_t>(i)] = static_cast<Index>(c);

  // upstream[c][d]: component d has an edge into component c.
  std::vector<std::vector<bool>> upstream(k, std::vector<bool>(k, false));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && M(i, j) > 0) {
        const auto ci = static_cast<std::size_t>(owner[static_cast<std::size_t>(i)]);
        const auto cj = static_cast<std::size_t>(owner[static_cast<std::size_t>(j)]);
        if (ci != cj) upstream[cj][ci] = true;
      }

  std::vector<PerronResult<Scalar>> roots;
  roots.reserve(k);
  for (const auto& component : components)
    roots.push_back(perron_root_irreducible(detail::submatrix(M, component, component)));

  std::vector<EigenPair<Scalar>> pairs;
  for (std::size_t c = 0; c < k; ++c) {
    const Scalar rho = roots[c].root;
    if (rho < lambda_floor - tol) continue;

    // All components with a path into c.
    std::vector<bool> ancestor(k, false);
    std::vector<std::size_t> frontier{c};
    while (!frontier.empty()) {
      const std::size_t cur = frontier.back();
      frontier.pop_back();
      for (std::size_t d = 0; d < k; ++d)
        if (upstream[cur][d] && !ancestor[d] && d != c) {
          ancestor[d] = true;
          frontier.push_back(d);
        }
    }
    bool distinguished = true;
    std::vector<Index> up;
    for (std::size_t d = 0; d < k; ++d) {
      if (!ancestor[d]) continue;
      if (roots[d].root >= rho - tol) distinguished = false;
      up.insert(up.end(), components[d].begin(), components[d].end());
    }
    if (!distinguished) continue;

    Vector v = Vector::Zero(n);
    const auto& own = components[c];
    for (std::size_t i = 0; i < own.size(); ++i) v(own[i]) = roots[c].vector(static_cast<Index>(i));
    if (!up.empty()) {
      const Index nu = static_cast<Index>(up.size());
      const Matrix lhs = rho * Matrix::Identity(nu, nu) - detail::submatrix(M, up, up);
      const Vector rhs = detail::submatrix(M, up, own) * roots[c].vector;
      const Vector vu = lhs.partialPivLu().solve(rhs);
      for (Index i = 0; i < nu; ++i) v(up[static_cast<std::size_t>(i)]) = std::max(Scalar(0), vu(i));
    }
    v /= v.maxCoeff();
    EigenPair<Scalar> pair;
    pair.lambda = rho;
    pair.residual = (M * v - rho * v).template lpNorm<Eigen::Infinity>();
    pair.v = std::move(v);
    pairs.push_back(std::move(pair));
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.lambda > b.lambda; });
  return pairs;
}

namespace detail {

// Scales v to max-norm 1 with its largest-magnitude entry positive; returns
// false unless every entry is ≥ −tol afterwards. Entries in [−tol, 0) are
// clamped to zero.
template <typename Vector>
bool make_nonnegative(Vector& v, typename Vector::Scalar tol) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) == 0) return false;
  v /= v(arg);
  if (v.minCoeff() < -tol) return false;
  v = v.cwiseMax(typename Vector::Scalar(0));
  return true;
}

}  // namespace detail

/// Eigenpairs (λ, v) of a Metzler matrix with λ ≥ lambda_floor − tol_eig and
/// v ≥ 0, sorted by decreasing λ.
///
/// Eigenvalues come from Hessenberg reduction plus Francis QR; each simple
/// real candidate gets its eigenvector by inverse iteration and a sign test.
/// Clustered eigenvalues, or candidates where inverse iteration stagnates,
/// are resolved by distinguished_eigenpairs().
template <typename Derived>
std::vector<EigenPair<typename Derived::Scalar>> nonneg_eigenpairs(
    const Eigen::MatrixBase<Derived>& M, typename Derived::Scalar lambda_floor) {
  using Scalar = typename Derived::Scalar;
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;
  detail::require_metzler(M, "nonneg_eigenpairs");
  const Index n = M.rows();
  const Matrix Md = M;
  const Scalar scale = std::max(Scalar(1), Md.cwiseAbs().rowwise().sum().maxCoeff());
  const Scalar tol = Scalar(tol::eig) * scale;

  Eigen::EigenSolver<Matrix> solver(Md, false);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("QR eigenvalue iteration did not converge");
  // Inside an irreducible class the Perron root is simple, so a repeated or
  // defective root comes from several classes sharing it. QR scatters a
  // k-fold root over a disc of radius about eps^(1/k); those values go to the
  // structural path instead of inverse iteration.
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  std::vector<Scalar> class_roots;
  for (const auto& component : strongly_connected_components(Md)) {
    class_roots.push_back(component.size() == 1
                              ? Md(component[0], component[0])
                              : perron_root_irreducible(detail::submatrix(Md, component, component)).root);
  }
  std::sort(class_roots.begin(), class_roots.end(), std::greater<>());
  struct SharedRoot {
    Scalar root;
    int count;
  };
  std::vector<SharedRoot> shared;
  for (std::size_t i = 0; i < class_roots.size();) {
    std::size_t j = i + 1;
    while (j < class_roots.size() && class_roots[i] - class_roots[j] <= tol) ++j;
    if (j - i > 1) shared.push_back({class_roots[i], static_cast<int>(j - i)});
    i = j;
  }
  auto near_shared = [&](std::complex<Scalar> ev) {
    for (const auto& s : shared)
      if (std::abs(ev - s.root) <= Scalar(10) * scale * std::pow(eps, Scalar(1) / s.count))
        return true;
    return false;
  };

  // Remaining near-coincident values are grouped; the floor applies to each
  // group's largest member.
  const Scalar cluster_tol = Scalar(1e-6) * scale;
  std::vector<Scalar> real_values;
  for (Index i = 0; i < n; ++i) {
    const auto ev = solver.eigenvalues()(i);
    if (near_shared(ev)) continue;
    if (std::abs(ev.imag()) <= cluster_tol) real_values.push_back(ev.real());
  }
  std::sort(real_values.begin(), real_values.end(), std::greater<>());
  std::vector<std::vector<Scalar>> clusters;
  for (Scalar value : real_values) {
    if (!clusters.empty() && clusters.back().back() - value <= cluster_tol)
      clusters.back().push_back(value);
    else
      clusters.push_back({value});
  }
  std::erase_if(clusters, [&](const auto& c) { return c.front() < lambda_floor - tol; });

  std::vector<EigenPair<Scalar>> pairs;
  std::vector<Scalar> structural_targets;
  for (const auto& s : shared)
    if (s.root >= lambda_floor - tol) structural_targets.push_back(s.root);
  for (const auto& cluster : clusters) {
    if (cluster.size() > 1) {
      structural_targets.push_back(cluster.front());
      continue;
    }
    const Scalar lambda = cluster.front();
    const Scalar shift = lambda + Scalar(1e-10) * scale;
    Eigen::PartialPivLU<Matrix> lu(Md - shift * Matrix::Identity(n, n));
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Scalar(1) + Scalar(0.1) * Scalar(i) / Scalar(n);
    // Iterate past the acceptance tolerance while the residual still drops:
    // leftover components of size tol would blur which entries vanish.
    const Scalar floor = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale;
    Scalar estimate = lambda, residual = std::numeric_limits<Scalar>::infinity();
    for (int it = 0; it < 30 && residual > floor; ++it) {
      Vector z = lu.solve(v);
      if (!z.allFinite()) break;
      z /= z.template lpNorm<Eigen::Infinity>();
      const Scalar next_estimate = z.dot(Md * z) / z.squaredNorm();
      const Scalar next_residual = (Md * z - next_estimate * z).template lpNorm<Eigen::Infinity>();
      if (residual <= tol && !(next_residual < Scalar(0.5) * residual)) break;
      v = std::move(z);
      estimate = next_estimate;
      residual = next_residual;
    }
    if (!(residual <= tol)) {
      structural_targets.push_back(lambda);
      continue;
    }
    if (!detail::make_nonnegative(v, Scalar(tol::eig))) continue;
    EigenPair<Scalar> pair;
    pair.lambda = estimate;
    pair.residual = (Md * v - estimate * v).template lpNorm<Eigen::Infinity>();
    pair.v = std::move(v);
    pairs.push_back(std::move(pair));
  }

  if (!structural_targets.empty()) {
    const auto structural = distinguished_eigenpairs(Md, lambda_floor);
    for (Scalar target : structural_targets) {
      for (const auto& pair : structural) {
        if (std::abs(pair.lambda - target) > cluster_tol) continue;
        if (pair.residual > tol) {
          std::ostringstream os;
          os << "eigenvalue " << target << " is defective and its structural eigenvector "
             << "has residual " << pair.residual;
          throw DefectiveEigenvalue(os.str());
        }
        const bool duplicate = std::any_of(pairs.begin(), pairs.end(), [&](const auto& p) {
          return std::abs(p.lambda - pair.lambda) <= cluster_tol &&
                 (p.v - pair.v).template lpNorm<Eigen::Infinity>() <= Scalar(1e-6);
        });
        if (!duplicate) pairs.push_back(pair);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.lambda > b.lambda; });
  return pairs;
}

/// Outcome of a Hurwitz test on a Metzler matrix.
struct HurwitzCertificate {
  bool hurwitz = false;
  double abscissa = 0;
  // v ≥ 1 with Mv ≤ −1, present when the LP found one.
  std::optional<Eigen::VectorXd> positive_vector;
  // The LP verdict matches the spectral verdict.
  bool lp_agrees = true;
};

/// Solves the feasibility program v ≥ 1, Mv ≤ −1.
std::optional<Eigen::VectorXd> hurwitz_lp_certificate(const Eigen::MatrixXd& M);

HurwitzCertificate is_hurwitz(const Eigen::MatrixXd& M);

}  // namespace poslr
