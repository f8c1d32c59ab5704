#pragma once

#include <cmath>
#include <functional>

#include <json.hpp>

#include "movingflow/config.hpp"
#include "movingflow/mesh.hpp"
#include "movingflow/solver.hpp"

namespace mf::testing {

// every node set, boundary included (interpolate keeps the Dirichlet trace at 0)
inline Field nodal(const Mesh& mesh, const std::function<double(double)>& fn, double t) {
  Field f = zero_field(mesh, t);
  for (Eigen::Index i = 0; i < mesh.nodes.size(); ++i) f.values[i] = fn(mesh.nodes[i]);
  return f;
}

// u(x, t) sampled on a fixed interval, one slice with `steps` uniform levels
inline SpaceTimeField fixed_field(Interval iv, double h, double T, int steps,
                                  const std::function<double(double, double)>& u) {
  SpaceTimeField st;
  st.flow = FlowMap{VelocityField::zero(), 1e-3};
  Slice s{0.0, T, build_mesh(iv, h), {}};
  for (int k = 0; k <= steps; ++k) {
    const double t = T * k / steps;
    s.steps.push_back(nodal(s.mesh, [&](double x) { return u(x, t); }, t));
  }
  st.slices.push_back(std::move(s));
  return st;
}

inline nlohmann::json zero_config() {
  nlohmann::json j = builtin_l1_config();
  j["problem"]["velocity"] = {{"preset", "constant"}, {"c", 0.2}};
  j["problem"]["nonlinearity"] = {{"preset", "none"}};
  j["problem"]["data"] = {{"u0", {{"preset", "zero"}}}, {"f", {{"preset", "zero"}}}};
  j["problem"]["T"] = 0.1;
  j["discretization"]["N"] = 2;
  j["discretization"]["dt"] = 0.01;
  j["discretization"]["h_target"] = 0.1;
  j["regularization"]["eps"] = {0.1, 0.01};
  return j;
}

inline RunResult run_of(const nlohmann::json& j, double eps) { return execute(parse_config(j), eps); }

}  // namespace mf::testing
