#include "poslr/gain.hpp"

#include <sstream>

#include "poslr/finite_horizon.hpp"

namespace poslr {

L1GainReport l1_gain_from_value(const Problem& spec, const Eigen::VectorXd& p) {
  if (p.size() != spec.states()) throw DimensionMismatch("p must have n entries");
  L1GainReport out;
  out.gamma_star = spec.F.transpose() * p;
  out.gamma_star_max = out.gamma_star.size() ? out.gamma_star.maxCoeff() : 0.0;
  const GammaCheck<double> check = check_gamma(spec, p);
  out.admissible = check.ok;
  out.margin = check.margin;
  out.l1_interpretation = (spec.H.size() == 0 || spec.H.isZero(0.0)) &&
                          (spec.G.size() == 0 || spec.G.isZero(0.0));
  out.finite_horizon = spec.horizon.is_finite();
  return out;
}

L1GainReport min_l1_gain(const Problem& spec, Index steps, const ValueIterationOptions& options) {
  if (spec.horizon.is_finite()) {
    const auto traj = steps > 0 ? solve_hjb_ode(spec, steps) : solve_hjb_ode(spec);
    return l1_gain_from_value(spec, traj.initial());
  }
  const auto vi = value_iteration(spec, options);
  if (!vi.converged()) {
    std::ostringstream os;
    os << "value iteration ended " << to_string(vi.status) << " after " << vi.iterations
       << " iterations";
    throw SolveFailed(os.str());
  }
  return l1_gain_from_value(spec, vi.p);
}

}  // namespace poslr
