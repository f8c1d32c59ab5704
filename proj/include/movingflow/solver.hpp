#pragma once

#include <Eigen/Dense>
#include <vector>

#include "movingflow/flowmap.hpp"
#include "movingflow/laws.hpp"
#include "movingflow/mesh.hpp"
#include "movingflow/report.hpp"

namespace mf {

struct SliceGrid {
  std::vector<double> times;
  std::vector<Interval> domains;
  double Delta = 0.0;

  int slices() const { return static_cast<int>(times.size()) - 1; }
};

SliceGrid partition_time(double T, int N, const MovingDomain& domain);
int steps_per_slice(const SliceGrid& grid, int j, double dt);

// Material: only u div v remains, the advective part is carried by the handoff
enum class Convection { Upwind, Centered, Material };

// how the last state of slice j-1 seeds slice j
enum class Handoff { Characteristic, Restrict, Literal };

struct SolverConfig {
  double eps = 0.1;
  double h_target = 1.0 / 32.0;
  double dt = 1e-2;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  Convection convection_scheme = Convection::Upwind;
  Handoff handoff = Handoff::Characteristic;

  void validate() const;
};

struct NewtonStats {
  int iterations = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  std::vector<double> history;
};

// Solves J x = rhs for tridiagonal J (sub[i] = J(i,i-1), sup[i] = J(i,i+1)) with partial pivoting.
Eigen::VectorXd solve_tridiagonal(const Eigen::VectorXd& sub, const Eigen::VectorXd& diag, const Eigen::VectorXd& sup,
                                  const Eigen::VectorXd& rhs);

struct StepProblem {
  const DiffusionLaw& law;
  const Nonlinearity& nl;
  const VelocityField& v;
  const SpaceTimeFn& f_eps;
  double eps;
};

// Interior residual of the backward Euler weak form at time t (entries 0 and n are zero).
Eigen::VectorXd step_residual(const Mesh& mesh, const Eigen::VectorXd& u, const Field& u_prev, double t, double dt,
                              const StepProblem& prob, Convection scheme);

Field implicit_step(const Mesh& mesh, const Field& u_prev, double t, double dt, const DiffusionLaw& law,
                    const Nonlinearity& nl, const VelocityField& v, const SpaceTimeFn& f_eps, double eps,
                    const SolverConfig& cfg, NewtonStats* stats = nullptr);

std::vector<Field> solve_slice(const SliceGrid& grid, int j, const Field& u_init, const DiffusionLaw& law,
                               const Nonlinearity& nl, const VelocityField& v, const SpaceTimeFn& f_eps, double eps,
                               const SolverConfig& cfg, std::vector<NewtonStats>* stats = nullptr);

struct RunResult {
  SpaceTimeField solution;
  std::vector<int> newton_iterations;
  std::vector<double> newton_residuals;
  std::vector<double> newton_tolerances;
  SolverConfig config;
  double eps = 0.0;
  double wall_time = 0.0;

  MovingDomain domain;
  DiffusionLaw law;
  Nonlinearity nl;
  VelocityField v;
  ProblemData data;
  RegularizedData regularized;
  SliceGrid grid;
};

RunResult solve_moving(const MovingDomain& domain, const DiffusionLaw& law, const Nonlinearity& nl,
                       const VelocityField& v, const ProblemData& data, double eps, const SliceGrid& grid,
                       const SolverConfig& cfg);

EstimateReport lmax_bound_check(const RunResult& run);

}  // namespace mf
