#include "poslr/metzler.hpp"

#include "poslr/lp.hpp"

namespace poslr {

std::optional<Eigen::VectorXd> hurwitz_lp_certificate(const Eigen::MatrixXd& M) {
  const Index n = M.rows();
  lp::Model model = lp::Model::with_variables(n);
  model.cost.setOnes();
  model.lower.setOnes();
  for (Index i = 0; i < n; ++i) model.add_row(M.row(i), lp::RowSense::LessEqual, -1.0);
  const lp::Solution sol = lp::solve(model);
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  return sol.x;
}

HurwitzCertificate is_hurwitz(const Eigen::MatrixXd& M) {
  HurwitzCertificate cert;
  cert.abscissa = spectral_abscissa(M);
  cert.hurwitz = cert.abscissa < -tol::eig;
  if (cert.hurwitz) {
    cert.positive_vector = hurwitz_lp_certificate(M);
    cert.lp_agrees = cert.positive_vector.has_value();
  }
  return cert;
}

}  // namespace poslr
