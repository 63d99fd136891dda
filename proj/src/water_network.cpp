#include "poslr/water_network.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <sstream>
#include <thread>

namespace poslr {

WaterParams WaterParams::defaults(Index n, double alpha, double beta, double zeta_v,
                                  double rho_v) {
  WaterParams p;
  p.n = n;
  p.alpha = alpha;
  p.beta = beta;
  p.zeta_u = beta;
  p.zeta_v = zeta_v;
  p.rho_v = rho_v;
  p.rho_u = beta > 0 ? zeta_v * rho_v / beta : 0.0;
  return p;
}

void check_water_params(const WaterParams& p) {
  std::ostringstream os;
  if (p.n < 2) os << "n must be at least 2; ";
  const double values[] = {p.alpha, p.beta, p.zeta_u, p.zeta_v, p.rho_s, p.rho_u, p.rho_v};
  const char* names[] = {"alpha", "beta", "zeta_u", "zeta_v", "rho_s", "rho_u", "rho_v"};
  for (int i = 0; i < 7; ++i)
    if (!(values[i] >= 0)) os << names[i] << " must be nonnegative; ";
  if (p.rain && !(p.gamma >= 0)) os << "gamma must be nonnegative; ";
  if (p.beta < p.zeta_u) os << "beta >= zeta_u is violated; ";
  if (p.zeta_u * p.rho_u > p.zeta_v * p.rho_v * (1 + 1e-12))
    os << "zeta_u * rho_u <= zeta_v * rho_v is violated; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw InvariantViolation(msg.substr(0, msg.size() - 2));
}

Problem build_water_spec(const WaterParams& p, Horizon<double> horizon) {
  check_water_params(p);
  const Index n = p.n, m = n - 1;
  const double nd = double(n);
  Problem spec;
  spec.A = Eigen::MatrixXd::Zero(n, n);
  spec.A(0, 0) = -p.alpha;
  for (Index i = 1; i < n; ++i) {
    spec.A(i, i) = -(p.alpha + p.beta);
    spec.A(i - 1, i) = p.beta;
  }
  spec.B = Eigen::MatrixXd::Zero(n, m);
  for (Index j = 0; j < m; ++j) {
    spec.B(j, j) = -1;
    spec.B(j + 1, j) = 1;
  }
  spec.H = -spec.B;
  spec.E = Eigen::MatrixXd::Zero(m, n);
  spec.G = Eigen::MatrixXd::Zero(m, n);
  spec.r.resize(m);
  for (Index j = 0; j < m; ++j) {
    spec.E(j, j + 1) = p.zeta_u;
    spec.G(j, j) = double(j + 1) * p.zeta_v / nd;
    spec.r(j) = p.rho_u * double(j + 2) / nd;
  }
  spec.s = Eigen::VectorXd::Zero(n);
  spec.s(0) = p.rho_s;
  // The last section carries r_{n−1}ζ_u in E'|r| but no G'|δ| term; this
  // entry keeps s ≥ E'|r| − G'|δ| with equality.
  spec.s(n - 1) += p.zeta_u * p.rho_u;
  spec.delta = Eigen::VectorXd::Constant(m, p.rho_v);
  spec.x0 = Eigen::VectorXd::Ones(n);
  if (p.rain) {
    spec.F = Eigen::MatrixXd::Ones(n, 1);
    spec.gamma = Eigen::VectorXd::Constant(1, p.gamma);
  } else {
    spec.F.resize(n, 0);
    spec.gamma.resize(0);
  }
  spec.horizon = horizon;
  return spec;
}

std::vector<SweepRow> sweep_cost_vs_n(const WaterParams& base, const std::vector<Index>& sizes,
                                      const ValueIterationOptions& options) {
  auto run = [&](Index n) {
    SweepRow row;
    row.n = n;
    const auto start = std::chrono::steady_clock::now();
    try {
      WaterParams params = base;
      params.n = n;
      const Problem spec = build_water_spec(params);
      const auto vi = value_iteration(spec, options);
      row.cost = vi.p.dot(spec.x0);
      row.iterations = vi.iterations;
      row.status = vi.status;
      if (!vi.converged()) row.error = std::string("value iteration ") + to_string(vi.status);
    } catch (const Error& e) {
      row.error = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
  };

  // Instances are independent; run them in batches of the core count.
  const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows;
  rows.reserve(sizes.size());
  for (std::size_t first = 0; first < sizes.size(); first += batch) {
    std::vector<std::future<SweepRow>> jobs;
    for (std::size_t i = first; i < std::min(sizes.size(), first + batch); ++i)
      jobs.push_back(std::async(std::launch::async, run, sizes[i]));
    for (auto& job : jobs) rows.push_back(job.get());
  }
  return rows;
}

}  // namespace poslr
