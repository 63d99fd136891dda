#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "poslr/metzler.hpp"
#include "poslr/problem.hpp"

namespace poslr {

struct DetectabilityResult {
  bool detectable = true;
  // Some unobserved nonnegative eigenvector sits at λ ≈ 0.
  bool marginal = false;
  // Nonnegative eigenpairs with λ ≥ 0 and Cv = 0.
  std::vector<EigenPair<double>> witnesses;
};

/// (C, M) is detectable when no nonnegative eigenvector v of the Metzler
/// matrix M with eigenvalue λ ≥ 0 satisfies Cv = 0. C must be nonnegative;
/// with several rows, Cv = 0 means every row vanishes on v.
DetectabilityResult detectability_check(const Eigen::MatrixXd& C, const Eigen::MatrixXd& M);

struct ClosedLoopCertificate {
  double abscissa = 0;
  bool hurwitz = false;
  std::optional<Eigen::VectorXd> positive_vector;
  Eigen::VectorXd output_row;  // s − K'r, round-off clamped
  bool output_nonnegative = true;
  DetectabilityResult detectability;
  bool bellman_solved = false;
  // Bellman-solved and detectable, yet not Hurwitz. Never expected.
  bool contradiction = false;
  std::vector<std::string> notes;
};

/// Stability certificate for u = −Kx with |K| ≤ E. Throws
/// NonMetzlerClosedLoop when A − BK is not Metzler. When `p` is given, the
/// certificate also records whether p solves the Bellman equation with K as
/// its minimizing gain.
ClosedLoopCertificate closed_loop_certificate(const Problem& spec, const Eigen::MatrixXd& K,
                                              const std::optional<Eigen::VectorXd>& p = {});

/// s − E'|r| has all entries strictly positive: every state is penalized
/// under every admissible gain, so detectability holds for all of them.
bool corollary_detectability(const Problem& spec);

}  // namespace poslr
