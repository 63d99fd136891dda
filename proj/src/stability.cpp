#include "poslr/stability.hpp"

#include <cmath>
#include <sstream>

#include "poslr/infinite_horizon.hpp"
#include "poslr/sign_pattern.hpp"

namespace poslr {
namespace {

bool disturbance_free(const Problem& spec) {
  return (spec.H.size() == 0 || spec.H.isZero(0.0)) && (spec.G.size() == 0 || spec.G.isZero(0.0));
}

}  // namespace

DetectabilityResult detectability_check(const Eigen::MatrixXd& C, const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw DimensionMismatch("M must be square");
  if (C.cols() != M.rows()) throw DimensionMismatch("C must have as many columns as M");
  if (C.size() > 0 && C.minCoeff() < 0) throw NegativeEntry("C must be nonnegative");

  DetectabilityResult out;
  const double scale = std::max(1.0, M.cwiseAbs().rowwise().sum().maxCoeff());
  const double lambda_tol = tol::eig * scale;
  const double c_scale = std::max(1.0, C.size() ? C.maxCoeff() : 0.0);
  for (auto& pair : nonneg_eigenpairs(M, 0.0)) {
    if (pair.lambda < -lambda_tol) continue;
    const double seen = C.rows() ? (C * pair.v).maxCoeff() : 0.0;
    if (seen > tol::eig * c_scale) continue;
    out.detectable = false;
    if (pair.lambda <= lambda_tol) out.marginal = true;
    out.witnesses.push_back(std::move(pair));
  }
  return out;
}

ClosedLoopCertificate closed_loop_certificate(const Problem& spec, const Eigen::MatrixXd& K,
                                              const std::optional<Eigen::VectorXd>& p) {
  check_dimensions(spec);
  const Index n = spec.states(), m = spec.controls();
  if (K.rows() != m || K.cols() != n) throw DimensionMismatch("K must be m x n");
  if (((K.cwiseAbs() - spec.E).array() > tol::sol).any())
    throw InvalidArgument("|K| <= E is violated");

  const Eigen::MatrixXd closed = spec.A - spec.B * K;
  const double margin = off_diagonal_min(closed);
  if (margin < -tol::metzler) {
    std::ostringstream os;
    os << "A - BK is not Metzler (minimum off-diagonal entry " << margin << ")";
    throw NonMetzlerClosedLoop(os.str());
  }

  ClosedLoopCertificate cert;
  const HurwitzCertificate hurwitz = is_hurwitz(closed);
  cert.abscissa = hurwitz.abscissa;
  cert.hurwitz = hurwitz.hurwitz;
  cert.positive_vector = hurwitz.positive_vector;
  if (!hurwitz.lp_agrees) cert.notes.push_back("LP certificate disagrees with the spectrum");

  cert.output_row = spec.s - K.transpose() * spec.r;
  for (Index i = 0; i < n; ++i) {
    if (cert.output_row(i) < 0 && cert.output_row(i) >= -tol::sol) cert.output_row(i) = 0;
  }
  cert.output_nonnegative = cert.output_row.minCoeff() >= 0;
  if (!cert.output_nonnegative) {
    if (disturbance_free(spec))
      throw InvariantViolation("s - K'r has a negative entry although |K| <= E and s >= E'|r|");
    cert.notes.push_back("s - K'r has negative entries; detectability is not assessed");
    cert.detectability.detectable = false;
  } else {
    cert.detectability = detectability_check(Eigen::MatrixXd(cert.output_row.transpose()), closed);
  }

  if (p) {
    if (p->size() != n) throw DimensionMismatch("p must have n entries");
    const double residual = bellman_residual(spec, *p);
    const SignPattern pattern = control_signs(spec, *p);
    bool minimizing = true;
    for (Index i = 0; i < m && minimizing; ++i) {
      if (pattern.tie(i)) continue;
      const Eigen::RowVectorXd expected = pattern.sign(i) * spec.E.row(i);
      minimizing = (K.row(i) - expected).lpNorm<Eigen::Infinity>() <= tol::sol;
    }
    cert.bellman_solved =
        residual <= tol::sol * (1.0 + p->lpNorm<Eigen::Infinity>()) && minimizing;
    cert.contradiction = disturbance_free(spec) && cert.bellman_solved &&
                         cert.detectability.detectable && !cert.hurwitz;
  }
  return cert;
}

bool corollary_detectability(const Problem& spec) {
  check_dimensions(spec);
  const Eigen::VectorXd margin = spec.s - spec.E.transpose() * spec.r.cwiseAbs();
  return margin.size() > 0 && margin.minCoeff() > 0;
}

}  // namespace poslr
