#include "poslr/report.hpp"

#include <iomanip>
#include <string>

namespace poslr {
namespace {

json eigenpair_json(const EigenPair<double>& pair) {
  return {{"lambda", pair.lambda}, {"v", vector_to_json(pair.v)}, {"residual", pair.residual}};
}

json optional_vector(const std::optional<Eigen::VectorXd>& v) {
  return v ? vector_to_json(*v) : json(nullptr);
}

void header(std::ostream& out, const char* first, const char* prefix, Index count) {
  out << first;
  for (Index i = 1; i <= count; ++i) out << ',' << prefix << i;
}

}  // namespace

json to_json(const ValidationReport<double>& report) {
  return {{"ok", report.ok()},
          {"metzler_ok", report.metzler_ok},
          {"metzler_margin", std::isfinite(report.metzler_margin) ? json(report.metzler_margin)
                                                                  : json(nullptr)},
          {"cost_condition_ok", report.cost_condition_ok},
          {"cost_margin", vector_to_json(report.cost_margin)},
          {"messages", report.messages}};
}

json to_json(const HurwitzCertificate& cert) {
  return {{"hurwitz", cert.hurwitz},
          {"abscissa", cert.abscissa},
          {"positive_vector", optional_vector(cert.positive_vector)},
          {"lp_agrees", cert.lp_agrees}};
}

json to_json(const DetectabilityResult& result) {
  json witnesses = json::array();
  for (const auto& w : result.witnesses) witnesses.push_back(eigenpair_json(w));
  return {{"detectable", result.detectable},
          {"marginal", result.marginal},
          {"witnesses", witnesses}};
}

json to_json(const ClosedLoopCertificate& cert) {
  return {{"hurwitz", cert.hurwitz},
          {"abscissa", cert.abscissa},
          {"positive_vector", optional_vector(cert.positive_vector)},
          {"output_row", vector_to_json(cert.output_row)},
          {"output_nonnegative", cert.output_nonnegative},
          {"detectability", to_json(cert.detectability)},
          {"bellman_solved", cert.bellman_solved},
          {"contradiction", cert.contradiction},
          {"notes", cert.notes}};
}

json to_json(const L1GainReport& report) {
  return {{"gamma_star", vector_to_json(report.gamma_star)},
          {"gamma_star_max", report.gamma_star_max},
          {"admissible", report.admissible},
          {"margin", vector_to_json(report.margin)},
          {"l1_interpretation", report.l1_interpretation},
          {"finite_horizon", report.finite_horizon}};
}

json to_json(const ValueVector<double>& vi) {
  return {{"p", vector_to_json(vi.p)},
          {"residual", vi.residual},
          {"iterations", vi.iterations},
          {"h", vi.h},
          {"status", to_string(vi.status)}};
}

json to_json(const PrimalLr& primal) {
  json out = {{"status", lp::to_string(primal.status)}, {"iterations", primal.raw.iterations}};
  if (primal.status == lp::Status::Optimal) {
    out["p"] = vector_to_json(primal.p);
    out["zeta"] = vector_to_json(primal.zeta);
    out["objective"] = primal.objective;
    out["dual_objective"] = primal.raw.dual_objective;
  } else if (primal.status == lp::Status::Unbounded) {
    out["ray_p"] = vector_to_json(primal.ray_p);
    out["unbounded_entries"] = primal.unbounded_entries;
  }
  return out;
}

json to_json(const DualLr& dual) {
  json out = {{"status", lp::to_string(dual.status)}, {"iterations", dual.raw.iterations}};
  if (dual.status == lp::Status::Optimal) {
    out["x"] = vector_to_json(dual.x);
    out["u"] = vector_to_json(dual.u);
    out["objective"] = dual.objective;
  }
  return out;
}

json to_json(const ControllerSet& controllers) {
  json candidates = json::array();
  for (const auto& c : controllers.candidates) {
    candidates.push_back({{"sign", vector_to_json(c.sign)},
                          {"K", matrix_to_json(c.K)},
                          {"hurwitz", c.hurwitz},
                          {"abscissa", c.abscissa},
                          {"dual_guided", c.dual_guided}});
  }
  return {{"candidates", candidates},
          {"any_hurwitz", controllers.any_hurwitz()},
          {"tie_explosion", controllers.tie_explosion}};
}

json to_json(const LrLpOutcome& outcome) {
  json out = {{"primal", to_json(outcome.primal)}, {"dual", to_json(outcome.dual)}};
  if (outcome.primal.status == lp::Status::Optimal) {
    out["residual"] = outcome.bellman_residual;
    out["controllers"] = to_json(outcome.controllers);
  }
  return out;
}

json to_json(const Lemma1Report& report) {
  return {{"primal_bounded", report.primal_bounded},
          {"dual_feasible", report.dual_feasible},
          {"grid_hurwitz", report.grid_hurwitz},
          {"grid_witness", report.grid_witness ? vector_to_json(*report.grid_witness)
                                               : json(nullptr)},
          {"agree", report.agree()}};
}

json to_json(const Error& error) {
  return {{"error", error.kind()},
          {"class", static_cast<int>(error.error_class())},
          {"message", error.what()}};
}

void write_csv(std::ostream& out, const ValueTrajectory<double>& traj) {
  out << std::setprecision(12);
  header(out, "t", "p_", traj.values.cols());
  out << '\n';
  for (Index k = 0; k < traj.points(); ++k) {
    out << traj.times(k);
    for (Index i = 0; i < traj.values.cols(); ++i) out << ',' << traj.values(k, i);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const GainSchedule<double>& schedule) {
  const Index m = schedule.signs.cols();
  out << std::setprecision(12);
  header(out, "t", "sigma_", m);
  for (Index i = 1; i <= m; ++i) out << ",tie_" << i;
  out << '\n';
  for (Index k = 0; k < schedule.points(); ++k) {
    out << schedule.times(k);
    for (Index i = 0; i < m; ++i) out << ',' << schedule.signs(k, i);
    for (Index i = 0; i < m; ++i) out << ',' << (schedule.ties(k, i) ? 1 : 0);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<IterateRecord>& trace) {
  out << std::setprecision(12) << "k,p_norm,step_norm\n";
  for (const auto& rec : trace) out << rec.k << ',' << rec.p_norm << ',' << rec.step_norm << '\n';
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << std::setprecision(12);
  header(out, "t", "x_", traj.x.cols());
  out << ",J\n";
  for (Index k = 0; k < traj.t.size(); ++k) {
    out << traj.t(k);
    for (Index i = 0; i < traj.x.cols(); ++i) out << ',' << traj.x(k, i);
    out << ',' << traj.J(k) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << std::setprecision(12) << "n,cost,iterations,seconds,status\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.cost << ',' << row.iterations << ',' << row.seconds << ','
        << (row.error.empty() ? to_string(row.status) : "failed") << '\n';
  }
}

}  // namespace poslr
