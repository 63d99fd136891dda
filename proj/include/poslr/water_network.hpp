#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poslr/infinite_horizon.hpp"
#include "poslr/problem.hpp"

namespace poslr {

/// Line-shaped water network: section i drains α and passes β downstream
/// into section i − 1; control u_j and disturbance v_j move water between
/// sections j and j + 1.
struct WaterParams {
  Index n = 100;
  double alpha = 3;
  double beta = 10;
  double zeta_u = 10;  // defaults to beta
  double zeta_v = 3;
  double rho_s = 1;
  double rho_u = 0.3;  // defaults to zeta_v * rho_v / zeta_u
  double rho_v = 1;
  bool rain = false;
  double gamma = 0;  // used when rain is set

  /// Defaults with ζ_u = β and ρ_u = ζ_vρ_v/ζ_u, for any α, β, ζ_v, ρ_v.
  static WaterParams defaults(Index n = 100, double alpha = 3, double beta = 10,
                              double zeta_v = 3, double rho_v = 1);
};

/// Throws InvariantViolation when β < ζ_u, ζ_uρ_u > ζ_vρ_v, n < 2 or a
/// parameter is negative.
void check_water_params(const WaterParams& params);

Problem build_water_spec(const WaterParams& params,
                         Horizon<double> horizon = Horizon<double>::infinite());

struct SweepRow {
  Index n = 0;
  double cost = 0;  // p'x0 = 1'p
  long iterations = 0;
  double seconds = 0;
  IterationStatus status = IterationStatus::IterCap;
  std::string error;  // non-empty when the instance failed
};

/// Infinite-horizon cost p'x0 for each n in `sizes`, with the other
/// parameters taken from `base`. Failures are recorded per row.
std::vector<SweepRow> sweep_cost_vs_n(const WaterParams& base, const std::vector<Index>& sizes,
                                      const ValueIterationOptions& options = {});

}  // namespace poslr
