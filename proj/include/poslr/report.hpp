#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "poslr/errors.hpp"
#include "poslr/finite_horizon.hpp"
#include "poslr/gain.hpp"
#include "poslr/infinite_horizon.hpp"
#include "poslr/json_eigen.hpp"
#include "poslr/lr_lp.hpp"
#include "poslr/metzler.hpp"
#include "poslr/stability.hpp"
#include "poslr/water_network.hpp"
#include "poslr/worst_case.hpp"

namespace poslr {

using nlohmann::json;

json to_json(const ValidationReport<double>& report);
json to_json(const HurwitzCertificate& cert);
json to_json(const DetectabilityResult& result);
json to_json(const ClosedLoopCertificate& cert);
json to_json(const L1GainReport& report);
json to_json(const ValueVector<double>& vi);
json to_json(const PrimalLr& primal);
json to_json(const DualLr& dual);
json to_json(const ControllerSet& controllers);
json to_json(const LrLpOutcome& outcome);
json to_json(const Lemma1Report& report);
json to_json(const Error& error);

// CSV writers. Headers:
//   value trajectory  t,p_1..p_n
//   gain schedule     t,sigma_1..sigma_m,tie_1..tie_m
//   iteration trace   k,p_norm,step_norm
//   simulation        t,x_1..x_n,J
//   sweep             n,cost,iterations,seconds,status
void write_csv(std::ostream& out, const ValueTrajectory<double>& traj);
void write_csv(std::ostream& out, const GainSchedule<double>& schedule);
void write_csv(std::ostream& out, const std::vector<IterateRecord>& trace);
void write_csv(std::ostream& out, const Trajectory& traj);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace poslr
