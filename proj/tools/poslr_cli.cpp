// Command-line front end for the positive minimax regulator library.
//
//   poslr validate <problem.json>
//   poslr solve finite <problem.json> [--steps N] [--out DIR]
//   poslr solve infinite <problem.json> [--method vi|lp|both]
//   poslr analyze <problem.json> --controller <K.json>
//   poslr simulate <problem.json> [--controller K.json] [--disturbance none|worst]
//   poslr gen water [--n N ...] [--rain --gamma g] [--out FILE]
//   poslr repro fig3|fig4|fig5|example1|example2 [--out DIR]
//
// Reports go to stdout as JSON; tables go to CSV files. Failures print an
// error object on stderr and exit 1 (validation), 2 (solve) or 3 (I/O).

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "poslr/finite_horizon.hpp"
#include "poslr/gain.hpp"
#include "poslr/infinite_horizon.hpp"
#include "poslr/lr_lp.hpp"
#include "poslr/problem_io.hpp"
#include "poslr/reference_problems.hpp"
#include "poslr/report.hpp"
#include "poslr/stability.hpp"
#include "poslr/water_network.hpp"
#include "poslr/worst_case.hpp"

namespace fs = std::filesystem;
using namespace poslr;

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

template <typename T>
void write_csv_file(const fs::path& path, const T& table) {
  auto out = open_output(path);
  write_csv(out, table);
}

void write_json_file(const fs::path& path, const json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

void print(const json& doc) { std::cout << doc.dump(2) << '\n'; }

ValueVector<double> converged_vi(const Problem& spec) {
  auto vi = value_iteration(spec);
  if (!vi.converged())
    throw SolveFailed(std::string("value iteration ended ") + to_string(vi.status) + " after " +
                      std::to_string(vi.iterations) + " iterations");
  return vi;
}

json static_gain_json(const Problem& spec, const Eigen::VectorXd& p) {
  const StaticGain<double> gain = extract_static_gain(spec, p);
  json out = {{"sign", vector_to_json(gain.pattern.sign)},
              {"tie", vector_to_json(gain.pattern.tie.cast<int>())},
              {"K", matrix_to_json(gain.K)}};
  try {
    out["certificate"] = to_json(closed_loop_certificate(spec, gain.K, p));
  } catch (const Error& e) {
    out["certificate"] = to_json(e);
  }
  return out;
}

// --- subcommands ----------------------------------------------------------

int run_validate(const std::string& file) {
  const Problem spec = load_problem_file(file);
  const auto report = validate(spec);
  print(to_json(report));
  return report.ok() ? 0 : static_cast<int>(ErrorClass::Validation);
}

int run_solve_finite(const std::string& file, Index steps, std::optional<double> T,
                     const fs::path& out_dir) {
  Problem spec = load_problem_file(file);
  if (T) spec.horizon = Horizon<double>::finite(*T);
  if (!spec.horizon.is_finite()) throw InvalidArgument("problem has an infinite horizon; use --T");
  const auto traj = steps > 0 ? solve_hjb_ode(spec, steps) : solve_hjb_ode(spec);
  const auto schedule = extract_gain_schedule(spec, traj);
  const fs::path traj_csv = out_dir / "trajectory.csv";
  const fs::path gain_csv = out_dir / "gains.csv";
  write_csv_file(traj_csv, traj);
  write_csv_file(gain_csv, schedule);
  print({{"value", value_at(traj, spec.x0)},
         {"p0", vector_to_json(traj.initial())},
         {"steps", traj.points() - 1},
         {"trajectory_csv", traj_csv.string()},
         {"gain_csv", gain_csv.string()},
         {"gain", to_json(l1_gain_from_value(spec, traj.initial()))}});
  return 0;
}

int run_solve_infinite(const std::string& file, const std::string& method,
                       std::optional<double> h, const std::string& trace_csv) {
  const Problem spec = load_problem_file(file);
  json out;
  std::optional<double> vi_total, lp_total;
  if (method == "vi" || method == "both") {
    ValueIterationOptions options;
    options.h = h;
    options.record_trace = !trace_csv.empty();
    const auto vi = value_iteration(spec, options);
    if (!trace_csv.empty()) write_csv_file(trace_csv, vi.trace);
    json section = to_json(vi);
    if (vi.converged()) {
      vi_total = vi.p.sum();
      section["controller"] = static_gain_json(spec, vi.p);
      section["gain"] = to_json(l1_gain_from_value(spec, vi.p));
    }
    out["vi"] = section;
  }
  if (method == "lp" || method == "both") {
    const LrLpOutcome lp = solve_lr_lp(spec);
    out["lp"] = to_json(lp);
    if (lp.primal.status == lp::Status::Optimal) {
      lp_total = lp.primal.p.sum();
      json detect = json::array();
      for (const auto& c : lp.controllers.candidates) {
        try {
          detect.push_back(to_json(closed_loop_certificate(spec, c.K, lp.primal.p)));
        } catch (const Error& e) {
          detect.push_back(to_json(e));
        }
      }
      out["lp"]["certificates"] = detect;
    }
  }
  if (method == "both") {
    json agreement = {{"vi_total", vi_total ? json(*vi_total) : json(nullptr)},
                      {"lp_total", lp_total ? json(*lp_total) : json(nullptr)}};
    if (vi_total && lp_total) agreement["difference"] = std::abs(*vi_total - *lp_total);
    out["agreement"] = agreement;
  }
  if (!out.contains("vi") && !out.contains("lp")) throw InvalidArgument("unknown method " + method);
  print(out);
  // The report stays on stdout; the exit code still flags the failure.
  if (!vi_total && !lp_total) throw SolveFailed("no method produced a value vector");
  return 0;
}

int run_analyze(const std::string& file, const std::string& controller) {
  const Problem spec = load_problem_file(file);
  const Eigen::MatrixXd K = load_gain_file(controller);
  json out = {{"validation", to_json(validate(spec))}};
  std::optional<Eigen::VectorXd> p;
  if (spec.horizon.is_finite()) {
    const auto traj = solve_hjb_ode(spec);
    out["gain"] = to_json(l1_gain_from_value(spec, traj.initial()));
  } else {
    const auto vi = value_iteration(spec);
    out["value_iteration"] = to_json(vi);
    if (vi.converged()) {
      p = vi.p;
      out["gain"] = to_json(l1_gain_from_value(spec, vi.p));
    }
  }
  out["closed_loop"] = to_json(closed_loop_certificate(spec, K, p));
  print(out);
  return 0;
}

int run_simulate(const std::string& file, const std::string& controller,
                 const std::string& disturbance, std::optional<double> T, Index steps,
                 const fs::path& out_csv) {
  const Problem spec = load_problem_file(file);
  DisturbanceMode mode;
  if (disturbance == "none")
    mode = DisturbanceMode::None;
  else if (disturbance == "worst")
    mode = DisturbanceMode::Worst;
  else
    throw InvalidArgument("disturbance must be none or worst");

  Trajectory traj;
  double value = NAN;
  if (spec.horizon.is_finite() && controller.empty()) {
    const auto values = steps > 0 ? solve_hjb_ode(spec, steps) : solve_hjb_ode(spec);
    const auto schedule = extract_gain_schedule(spec, values);
    traj = simulate(spec, schedule, mode, &values);
    value = value_at(values, spec.x0);
  } else {
    std::optional<Eigen::VectorXd> p;
    Eigen::MatrixXd K;
    if (!spec.horizon.is_finite()) {
      const auto vi = value_iteration(spec);
      if (vi.converged()) {
        p = vi.p;
        value = vi.p.dot(spec.x0);
      }
    }
    if (!controller.empty()) {
      K = load_gain_file(controller);
    } else {
      if (!p) throw SolveFailed("no converged value vector to derive the optimal gain from");
      K = extract_static_gain(spec, *p).K;
    }
    const double horizon = T ? *T : spec.horizon.is_finite() ? spec.horizon.final_time() : 10.0;
    traj = simulate(spec, K, mode, horizon, steps > 0 ? steps : 10000, p);
  }
  write_csv_file(out_csv, traj);
  print({{"csv", out_csv.string()},
         {"final_cost", traj.J(traj.J.size() - 1)},
         {"value", std::isfinite(value) ? json(value) : json(nullptr)},
         {"points", traj.t.size()}});
  return 0;
}

// --- figure and example reproduction --------------------------------------

int repro_example1(const fs::path& dir) {
  const double T = 10;
  const Problem spec = nonunique_gain_problem(Horizon<double>::finite(T));
  const auto traj = solve_hjb_ode(spec, 10000);
  double max_error = 0;
  for (Index k = 0; k < traj.points(); ++k) {
    const double expected = 1 - std::exp(-(T - traj.times(k)));
    max_error = std::max(max_error, (traj.at(k).array() - expected).abs().maxCoeff());
  }
  write_csv_file(dir / "example1_trajectory.csv", traj);
  write_csv_file(dir / "example1_gains.csv", extract_gain_schedule(spec, traj));

  const SignPattern base = control_signs(spec, traj.at(0));
  json gains = json::array();
  for (const auto& sign : enumerate_tie_patterns(base)) {
    const Eigen::MatrixXd K = feedback_gain(spec.E, sign);
    const Eigen::MatrixXd closed = spec.A - spec.B * K;
    gains.push_back({{"sign", vector_to_json(sign)},
                     {"K", matrix_to_json(K)},
                     {"closed_loop", matrix_to_json(closed)},
                     {"hurwitz", to_json(is_hurwitz(closed))}});
  }
  const json doc = {{"value", value_at(traj, spec.x0)},
                    {"expected_value", 3 * (1 - std::exp(-T))},
                    {"max_trajectory_error", max_error},
                    {"gains", gains}};
  write_json_file(dir / "example1.json", doc);
  print(doc);
  return 0;
}

int repro_example2(const fs::path& dir) {
  const Problem spec = undetectable_problem();
  const auto vi = value_iteration(spec);
  const PrimalLr primal = solve_primal_lr(spec);
  const DualLr dual = solve_dual_lr(spec);
  const StaticGain<double> gain = extract_static_gain(spec, vi.p);
  json doc = {{"p", vector_to_json(vi.p)},
              {"value_iteration", to_json(vi)},
              {"primal_lp", to_json(primal)},
              {"dual_lp", to_json(dual)},
              {"open_loop_detectability",
               to_json(detectability_check(Eigen::MatrixXd(spec.s.transpose()), spec.A))},
              {"K", matrix_to_json(gain.K)},
              {"closed_loop", to_json(closed_loop_certificate(spec, gain.K, vi.p))}};
  write_json_file(dir / "example2.json", doc);
  print(doc);
  return 0;
}

// Optimal cost p(T − τ)'x0 against time-to-go τ.
int repro_fig3(const fs::path& dir, const WaterParams& params, double T, Index steps) {
  const Problem spec = build_water_spec(params, Horizon<double>::finite(T));
  const auto traj = solve_hjb_ode(spec, steps);
  auto out = open_output(dir / "fig3.csv");
  out << std::setprecision(12) << "tau,cost\n";
  for (Index k = traj.points() - 1; k >= 0; --k)
    out << T - traj.times(k) << ',' << traj.at(k).dot(spec.x0) << '\n';
  print({{"csv", (dir / "fig3.csv").string()}, {"T", T}, {"cost_at_T", value_at(traj, spec.x0)}});
  return 0;
}

// State trajectories under A, A + |H|G and A + |H|G − BK.
int repro_fig4(const fs::path& dir, const WaterParams& params, double T, Index steps) {
  const Problem spec = build_water_spec(params);
  const auto vi = converged_vi(spec);
  const Eigen::MatrixXd K = extract_static_gain(spec, vi.p).K;
  const Eigen::MatrixXd disturbed = spec.A + spec.H.cwiseAbs() * spec.G;
  const std::pair<const char*, Eigen::MatrixXd> cases[] = {
      {"fig4a_open_loop.csv", spec.A},
      {"fig4b_disturbed.csv", disturbed},
      {"fig4c_controlled.csv", disturbed - spec.B * K}};
  json summary = {{"T", T}, {"p_x0", vi.p.dot(spec.x0)}};
  json files = json::array();
  for (const auto& [name, M] : cases) {
    const Eigen::MatrixXd x = linear_flow(M, spec.x0, T, steps);
    auto out = open_output(dir / name);
    out << std::setprecision(12) << 't';
    for (Index i = 1; i <= x.cols(); ++i) out << ",x_" << i;
    out << '\n';
    for (Index k = 0; k < x.rows(); ++k) {
      out << T * double(k) / double(steps);
      for (Index i = 0; i < x.cols(); ++i) out << ',' << x(k, i);
      out << '\n';
    }
    files.push_back({{"csv", (dir / name).string()}, {"abscissa", spectral_abscissa(M)}});
  }
  summary["cases"] = files;
  write_json_file(dir / "fig4.json", summary);
  print(summary);
  return 0;
}

int repro_fig5(const fs::path& dir, const WaterParams& params) {
  std::vector<Index> sizes;
  for (Index n = 2; n < 200; n += 10) sizes.push_back(n);
  sizes.push_back(200);
  const auto rows = sweep_cost_vs_n(params, sizes);
  write_csv_file(dir / "fig5.csv", rows);
  json table = json::array();
  for (const auto& row : rows) table.push_back({{"n", row.n}, {"cost", row.cost}});
  print({{"csv", (dir / "fig5.csv").string()}, {"rows", table}});
  return 0;
}

void add_water_options(CLI::App* cmd, WaterParams& params, bool& zeta_u_set, bool& rho_u_set) {
  cmd->add_option("--n", params.n, "number of sections")->check(CLI::Range(Index(2), Index(100000)));
  cmd->add_option("--alpha", params.alpha, "dissipation rate");
  cmd->add_option("--beta", params.beta, "downstream flow rate");
  cmd->add_option_function<double>(
      "--zeta-u", [&](double v) { params.zeta_u = v; zeta_u_set = true; },
      "control capacity scale (default beta)");
  cmd->add_option("--zeta-v", params.zeta_v, "disturbance capacity scale");
  cmd->add_option("--rho-s", params.rho_s, "cost on the outlet section");
  cmd->add_option_function<double>(
      "--rho-u", [&](double v) { params.rho_u = v; rho_u_set = true; },
      "control cost scale (default zeta_v*rho_v/zeta_u)");
  cmd->add_option("--rho-v", params.rho_v, "disturbance reward scale");
}

void finish_water_defaults(WaterParams& params, bool zeta_u_set, bool rho_u_set) {
  if (!zeta_u_set) params.zeta_u = params.beta;
  if (!rho_u_set) params.rho_u = params.zeta_u > 0 ? params.zeta_v * params.rho_v / params.zeta_u : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bang-bang minimax regulators for positive linear systems"};
  app.require_subcommand(1);

  std::string file, controller, method = "vi", disturbance = "none", trace_csv;
  Index steps = 0;
  std::optional<double> T, h;
  fs::path out_dir = ".", out_file;

  auto* validate_cmd = app.add_subcommand("validate", "check the standing hypotheses");
  validate_cmd->add_option("problem", file, "problem file")->required();

  auto* solve_cmd = app.add_subcommand("solve", "compute the optimal value and gains");
  solve_cmd->require_subcommand(1);
  auto* finite_cmd = solve_cmd->add_subcommand("finite", "integrate the value ODE");
  finite_cmd->add_option("problem", file, "problem file")->required();
  finite_cmd->add_option("--steps", steps, "RK4 steps (default max(1e4, 1000 T))");
  finite_cmd->add_option("--T", T, "override the final time");
  finite_cmd->add_option("--out", out_dir, "directory for the CSV outputs");
  auto* infinite_cmd = solve_cmd->add_subcommand("infinite", "solve the algebraic equation");
  infinite_cmd->add_option("problem", file, "problem file")->required();
  infinite_cmd->add_option("--method", method, "vi, lp or both")
      ->check(CLI::IsMember({"vi", "lp", "both"}));
  infinite_cmd->add_option("--rate", h, "value-iteration rate h");
  infinite_cmd->add_option("--trace", trace_csv, "write the iteration trace CSV");

  auto* analyze_cmd = app.add_subcommand("analyze", "certify a given controller");
  analyze_cmd->add_option("problem", file, "problem file")->required();
  analyze_cmd->add_option("--controller", controller, "gain file {\"K\": [[...]]}")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate the closed loop");
  simulate_cmd->add_option("problem", file, "problem file")->required();
  simulate_cmd->add_option("--controller", controller, "gain file (default: optimal gain)");
  simulate_cmd->add_option("--disturbance", disturbance, "none or worst")
      ->check(CLI::IsMember({"none", "worst"}));
  simulate_cmd->add_option("--T", T, "simulation horizon");
  simulate_cmd->add_option("--steps", steps, "RK4 steps");
  simulate_cmd->add_option("--out", out_file, "trajectory CSV")->default_val("simulation.csv");

  WaterParams water = WaterParams::defaults();
  bool zeta_u_set = false, rho_u_set = false;
  bool rain = false;
  double gamma = 0;

  auto* gen_cmd = app.add_subcommand("gen", "generate problem files");
  gen_cmd->require_subcommand(1);
  auto* water_cmd = gen_cmd->add_subcommand("water", "line-shaped water network");
  add_water_options(water_cmd, water, zeta_u_set, rho_u_set);
  water_cmd->add_flag("--rain", rain, "add the rain channel F = 1");
  water_cmd->add_option("--gamma", gamma, "rain reward (with --rain)");
  water_cmd->add_option("--T", T, "finite horizon (default infinite)");
  water_cmd->add_option("--out", out_file, "problem file (default stdout)");

  std::string target;
  auto* repro_cmd = app.add_subcommand("repro", "emit figure and example data");
  repro_cmd->add_option("target", target, "fig3, fig4, fig5, example1 or example2")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "example1", "example2"}));
  repro_cmd->add_option("--out", out_dir, "output directory");
  repro_cmd->add_option("--T", T, "horizon for fig3 (10) and fig4 (10)");
  repro_cmd->add_option("--steps", steps, "grid steps");
  add_water_options(repro_cmd, water, zeta_u_set, rho_u_set);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorClass::Validation);
  }

  try {
    if (*validate_cmd) return run_validate(file);
    if (*finite_cmd) return run_solve_finite(file, steps, T, out_dir);
    if (*infinite_cmd) return run_solve_infinite(file, method, h, trace_csv);
    if (*analyze_cmd) return run_analyze(file, controller);
    if (*simulate_cmd) return run_simulate(file, controller, disturbance, T, steps, out_file);
    if (*water_cmd) {
      finish_water_defaults(water, zeta_u_set, rho_u_set);
      water.rain = rain;
      water.gamma = gamma;
      const Problem spec = build_water_spec(
          water, T ? Horizon<double>::finite(*T) : Horizon<double>::infinite());
      if (out_file.empty())
        std::cout << save_problem(spec) << '\n';
      else
        save_problem_file(spec, out_file);
      return 0;
    }
    if (*repro_cmd) {
      finish_water_defaults(water, zeta_u_set, rho_u_set);
      const double horizon = T.value_or(10.0);
      if (target == "example1") return repro_example1(out_dir);
      if (target == "example2") return repro_example2(out_dir);
      if (target == "fig3") return repro_fig3(out_dir, water, horizon, steps > 0 ? steps : 10000);
      if (target == "fig4") return repro_fig4(out_dir, water, horizon, steps > 0 ? steps : 1000);
      if (target == "fig5") return repro_fig5(out_dir, water);
    }
  } catch (const Error& e) {
    std::cerr << to_json(e).dump() << '\n';
    return static_cast<int>(e.error_class());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << json{{"error", "IoError"}, {"class", 3}, {"message", e.what()}}.dump() << '\n';
    return static_cast<int>(ErrorClass::Io);
  }
  return 0;
}
