#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "movingflow/flowmap.hpp"
#include "movingflow/laws.hpp"
#include "movingflow/solver.hpp"

namespace mf {

inline constexpr const char* kSchema = "movingflow/1";

struct AuditRequest {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

struct RunConfig {
  MovingDomain domain;
  VelocityField velocity;
  DiffusionLaw law;
  Nonlinearity nl;
  ProblemData data;
  SpaceTimeFn exact;  // set by manufactured-solution presets
  int N = 1;
  SolverConfig solver;
  std::vector<double> eps;
  std::vector<AuditRequest> audits;
  std::uint64_t seed = 0;
  std::string output_dir = "movingflow_out";
  nlohmann::json echo;  // normalized input, written back verbatim
};

// Throws ConfigError naming the offending JSON path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json builtin_l1_config();
nlohmann::json builtin_mms_config(double h_target, double dt, double T = 0.5);

SliceGrid make_grid(const RunConfig& cfg);
RunResult execute(const RunConfig& cfg, double eps);

}  // namespace mf
