#include "movingflow/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "movingflow/errors.hpp"

namespace mf {

SliceGrid partition_time(double T, int N, const MovingDomain& domain) {
  if (N < 1) throw ParameterError("partition_time: N must be >= 1");
  if (!(T > 0.0)) throw ParameterError("partition_time: T must be positive");
  SliceGrid grid;
  for (int j = 0; j <= N; ++j) {
    const double t = j == N ? T : T * j / N;
    grid.times.push_back(t);
    grid.domains.push_back(domain_at(domain, t));
  }
  for (int j = 0; j < N; ++j) grid.Delta = std::max(grid.Delta, grid.times[j + 1] - grid.times[j]);
  return grid;
}

int steps_per_slice(const SliceGrid& grid, int j, double dt) {
  const double span = grid.times[j + 1] - grid.times[j];
  return std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
}

void SolverConfig::validate() const {
  if (!(eps > 0.0) || !(h_target > 0.0) || !(dt > 0.0) || !(newton_tol > 0.0) || newton_max_iter < 1)
    throw ParameterError("solver config: eps, h_target, dt, newton_tol must be positive and newton_max_iter >= 1");
}

Eigen::VectorXd solve_tridiagonal(const Eigen::VectorXd& sub, const Eigen::VectorXd& diag, const Eigen::VectorXd& sup,
                                  const Eigen::VectorXd& rhs) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd d = diag, du = sup, dl = sub, b = rhs;
  Eigen::VectorXd du2 = Eigen::VectorXd::Zero(n);
  // Row i holds (dl[i+1] below); elimination with row swaps as in LAPACK gtsv.
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double below = dl[i + 1];
    if (std::abs(d[i]) >= std::abs(below)) {
      if (d[i] == 0.0) throw DegeneracyError("singular tridiagonal system");
      const double m = below / d[i];
      d[i + 1] -= m * du[i];
      b[i + 1] -= m * b[i];
      dl[i + 1] = 0.0;
    } else {
      const double m = d[i] / below;
      d[i] = below;
      const double tmp = d[i + 1];
      d[i + 1] = du[i] - m * tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -m * du2[i];
      }
      du[i] = tmp;
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= m * b[i];
      dl[i + 1] = 0.0;
    }
  }
  if (d[n - 1] == 0.0) throw DegeneracyError("singular tridiagonal system");
  Eigen::VectorXd x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  if (n > 1) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  for (Eigen::Index i = n - 3; i >= 0; --i) x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  return x;
}

namespace {

double shape(int local, int g) {
  const double s = 0.5 * (1.0 + gauss3::nodes[g]);
  return local == 0 ? 1.0 - s : s;
}

struct StepCache {
  Eigen::MatrixXd vq, dq, fq, xq, wq;  // per element x gauss point
  Eigen::VectorXd vbar;
};

StepCache make_cache(const Mesh& mesh, double t, const StepProblem& prob) {
  const int ne = mesh.elements();
  StepCache c{Eigen::MatrixXd(ne, 3), Eigen::MatrixXd(ne, 3), Eigen::MatrixXd(ne, 3), Eigen::MatrixXd(ne, 3), Eigen::MatrixXd(ne, 3),
              Eigen::VectorXd(ne)};
  for (int e = 0; e < ne; ++e) {
    double acc = 0.0;
    for (int g = 0; g < 3; ++g) {
      const double x = mesh.gauss_x(e, g);
      c.xq(e, g) = x;
      c.wq(e, g) = mesh.gauss_w(e, g);
      c.vq(e, g) = prob.v.eval(x, t);
      c.dq(e, g) = prob.v.divergence(x, t);
      c.fq(e, g) = prob.f_eps(x, t);
      acc += c.wq(e, g) * c.vq(e, g);
    }
    c.vbar[e] = acc / mesh.length(e);
  }
  return c;
}

struct Pair {
  double a = 0.0, b = 0.0;
};

Pair reaction(const StepCache& c, int e, double L, double ua, double ub, double t, const StepProblem& prob) {
  Pair r;
  const double xi = (ub - ua) / L;
  for (int g = 0; g < 3; ++g) {
    const double u = shape(0, g) * ua + shape(1, g) * ub;
    const double val = c.wq(e, g) * regularize_value(prob.nl.g(c.xq(e, g), t, u, xi), prob.eps);
    r.a += val * shape(0, g);
    r.b += val * shape(1, g);
  }
  return r;
}

struct Assembly {
  Eigen::VectorXd R, sub, diag, sup;
};

Assembly assemble(const Mesh& mesh, const Eigen::VectorXd& u, const Field& u_prev, double t, double dt,
                  const StepProblem& prob, Convection scheme, const StepCache& c, bool jacobian) {
  const int n = mesh.elements();
  Assembly A;
  A.R = Eigen::VectorXd::Zero(n + 1);
  if (jacobian) {
    A.sub = A.diag = A.sup = Eigen::VectorXd::Zero(n + 1);
  }
  for (int e = 0; e < n; ++e) {
    const double L = mesh.length(e);
    const double ua = u[e], ub = u[e + 1];
    double Ra = 0.0, Rb = 0.0, Jaa = 0.0, Jab = 0.0, Jba = 0.0, Jbb = 0.0;
    for (int g = 0; g < 3; ++g) {
      const double Na = shape(0, g), Nb = shape(1, g), w = c.wq(e, g);
      const double uq = Na * ua + Nb * ub;
      const double up = Na * u_prev.values[e] + Nb * u_prev.values[e + 1];
      const double m = w * (uq - up) / dt - w * c.fq(e, g);
      Ra += m * Na;
      Rb += m * Nb;
      Jaa += w * Na * Na / dt;
      Jab += w * Na * Nb / dt;
      Jba += w * Nb * Na / dt;
      Jbb += w * Nb * Nb / dt;
      if (scheme == Convection::Centered) {
        const double cv = w * c.vq(e, g) / L;
        Ra += cv * uq;
        Rb -= cv * uq;
        Jaa += cv * Na;
        Jab += cv * Nb;
        Jba -= cv * Na;
        Jbb -= cv * Nb;
      } else if (scheme == Convection::Material) {
        const double r = w * c.dq(e, g);
        Ra += r * uq * Na;
        Rb += r * uq * Nb;
        Jaa += r * Na * Na;
        Jab += r * Na * Nb;
        Jba += r * Nb * Na;
        Jbb += r * Nb * Nb;
      }
    }
    if (scheme == Convection::Upwind) {
      const double vp = std::max(c.vbar[e], 0.0), vm = std::min(c.vbar[e], 0.0);
      const double F = vp * ua + vm * ub;
      Ra += F;
      Rb -= F;
      Jaa += vp;
      Jab += vm;
      Jba -= vp;
      Jbb -= vm;
    }
    const double xi = (ub - ua) / L;
    const double F = smoothed_flux(prob.law.p, prob.law.newton_eta, xi);
    Ra -= F;
    Rb += F;
    const Pair gr = reaction(c, e, L, ua, ub, t, prob);
    Ra += gr.a;
    Rb += gr.b;
    if (jacobian) {
      const double s = smoothed_flux_slope(prob.law.p, prob.law.newton_eta, xi) / L;
      Jaa += s;
      Jab -= s;
      Jba -= s;
      Jbb += s;
      const double da = 1e-7 * std::max(1.0, std::abs(ua)), db = 1e-7 * std::max(1.0, std::abs(ub));
      const Pair pa = reaction(c, e, L, ua + da, ub, t, prob);
      const Pair pb = reaction(c, e, L, ua, ub + db, t, prob);
      Jaa += (pa.a - gr.a) / da;
      Jba += (pa.b - gr.b) / da;
      Jab += (pb.a - gr.a) / db;
      Jbb += (pb.b - gr.b) / db;
      A.diag[e] += Jaa;
      A.sup[e] += Jab;
      A.sub[e + 1] += Jba;
      A.diag[e + 1] += Jbb;
    }
    A.R[e] += Ra;
    A.R[e + 1] += Rb;
  }
  A.R[0] = 0.0;
  A.R[n] = 0.0;
  return A;
}

double inf_norm(const Eigen::VectorXd& r) { return r.size() ? r.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Eigen::VectorXd step_residual(const Mesh& mesh, const Eigen::VectorXd& u, const Field& u_prev, double t, double dt,
                              const StepProblem& prob, Convection scheme) {
  const StepCache c = make_cache(mesh, t, prob);
  return assemble(mesh, u, u_prev, t, dt, prob, scheme, c, false).R;
}

Field implicit_step(const Mesh& mesh, const Field& u_prev, double t, double dt, const DiffusionLaw& law,
                    const Nonlinearity& nl, const VelocityField& v, const SpaceTimeFn& f_eps, double eps,
                    const SolverConfig& cfg, NewtonStats* stats) {
  if (!(dt > 0.0)) throw ParameterError("implicit_step: dt must be positive");
  if (u_prev.values.size() != mesh.nodes.size()) throw ParameterError("implicit_step: u_prev is not on the mesh");
  const StepProblem prob{law, nl, v, f_eps, eps};
  const StepCache c = make_cache(mesh, t, prob);
  const int n = mesh.elements();

  double data_scale = 0.0;
  {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    for (int e = 0; e < n; ++e)
      for (int g = 0; g < 3; ++g) {
        const double up = shape(0, g) * u_prev.values[e] + shape(1, g) * u_prev.values[e + 1];
        const double val = c.wq(e, g) * (up / dt + c.fq(e, g));
        b[e] += val * shape(0, g);
        b[e + 1] += val * shape(1, g);
      }
    b[0] = b[n] = 0.0;
    data_scale = inf_norm(b);
  }
  const double tol = cfg.newton_tol * (1.0 + data_scale);
  const Convection scheme = cfg.handoff == Handoff::Characteristic ? Convection::Material : cfg.convection_scheme;

  Eigen::VectorXd u = u_prev.values;
  u[0] = u[n] = 0.0;
  Assembly A = assemble(mesh, u, u_prev, t, dt, prob, scheme, c, true);
  double r = inf_norm(A.R);
  std::vector<double> history{r};
  int it = 0;
  while (!(r <= tol)) {
    if (it >= cfg.newton_max_iter || !std::isfinite(r))
      throw NonconvergenceError("Newton failed at t=" + std::to_string(t) + " residual " + std::to_string(r), history);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(n + 1);
    if (n > 1) {
      const Eigen::Index m = n - 1;
      delta.segment(1, m) = solve_tridiagonal(A.sub.segment(1, m), A.diag.segment(1, m), A.sup.segment(1, m),
                                              -A.R.segment(1, m));
    }
    double lambda = 1.0;
    Eigen::VectorXd trial;
    Assembly At;
    double rt = 0.0;
    for (;;) {
      trial = u + lambda * delta;
      At = assemble(mesh, trial, u_prev, t, dt, prob, scheme, c, true);
      rt = inf_norm(At.R);
      if (rt < (1.0 - 1e-4 * lambda) * r || lambda <= 0x1.0p-10) break;
      lambda *= 0.5;
    }
    u = trial;
    A = std::move(At);
    r = rt;
    history.push_back(r);
    ++it;
  }
  if (stats) *stats = {it, r, tol, history};
  return {mesh, u, t};
}

std::vector<Field> solve_slice(const SliceGrid& grid, int j, const Field& u_init, const DiffusionLaw& law,
                               const Nonlinearity& nl, const VelocityField& v, const SpaceTimeFn& f_eps, double eps,
                               const SolverConfig& cfg, std::vector<NewtonStats>* stats) {
  const int m = steps_per_slice(grid, j, cfg.dt);
  const double t0 = grid.times[j], t1 = grid.times[j + 1];
  std::vector<Field> out{u_init};
  out.reserve(m + 1);
  for (int k = 1; k <= m; ++k) {
    const double t = k == m ? t1 : t0 + k * cfg.dt;
    NewtonStats st;
    try {
      out.push_back(implicit_step(u_init.mesh, out.back(), t, t - out.back().time, law, nl, v, f_eps, eps, cfg, &st));
    } catch (NonconvergenceError& e) {
      e.slice = j;
      e.step = k;
      throw;
    }
    if (stats) stats->push_back(std::move(st));
  }
  return out;
}

RunResult solve_moving(const MovingDomain& domain, const DiffusionLaw& law, const Nonlinearity& nl,
                       const VelocityField& v, const ProblemData& data, double eps, const SliceGrid& grid,
                       const SolverConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunResult run;
  run.config = cfg;
  run.config.eps = eps;
  run.eps = eps;
  run.domain = domain;
  run.law = law;
  run.nl = nl;
  run.v = v;
  run.data = data;
  run.grid = grid;
  run.regularized = regularize_data(data, eps);
  run.solution.flow = domain.flow;

  Field u = interpolate(build_mesh(grid.domains[0], cfg.h_target), run.regularized.u0_eps, 0.0);
  for (int j = 0; j < grid.slices(); ++j) {
    if (j > 0) {
      const Mesh next = build_mesh(grid.domains[j], cfg.h_target);
      u = cfg.handoff == Handoff::Restrict ? restrict_field(u, next, grid.times[j])
                                           : transfer_field(u, next, domain.flow, grid.times[j - 1], grid.times[j]);
    }
    std::vector<NewtonStats> stats;
    Slice s{grid.times[j], grid.times[j + 1], u.mesh,
            solve_slice(grid, j, u, law, nl, v, run.regularized.f_eps, eps, run.config, &stats)};
    for (const auto& st : stats) {
      run.newton_iterations.push_back(st.iterations);
      run.newton_residuals.push_back(st.residual);
      run.newton_tolerances.push_back(st.tolerance);
    }
    u = s.steps.back();
    run.solution.slices.push_back(std::move(s));
  }
  run.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

EstimateReport lmax_bound_check(const RunResult& run) {
  EstimateReport rep;
  rep.name = "lmax_bound";
  double worst = 0.0;
  int worst_slice = 0;
  double worst_value = 0.0, worst_bound = 0.0;
  for (std::size_t j = 0; j < run.solution.slices.size(); ++j) {
    const Slice& s = run.solution.slices[j];
    double value = 0.0, G = 0.0, F = 0.0;
    for (const Field& f : s.steps) {
      value = std::max(value, sup_norm(f));
      for (int e = 0; e < s.mesh.elements(); ++e)
        for (int g = 0; g < 3; ++g) {
          const double x = s.mesh.gauss_x(e, g), u = f.at_gauss(e, g), du = f.slope(e);
          const double conv = du * run.v.eval(x, f.time) + u * run.v.divergence(x, f.time);
          G = std::max(G, std::abs(conv + regularize_g(run.nl, run.eps, x, f.time, u, du)));
          F = std::max(F, std::abs(run.regularized.f_eps(x, f.time)));
        }
    }
    const double xi = 2.0 * (s.t_end - s.t_begin);
    const double bound = sup_norm(s.steps.front()) + xi * (G + F);
    const double ratio = bound > 0.0 ? value / bound : (value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (j == 0 || ratio > worst) {
      worst = ratio;
      worst_slice = static_cast<int>(j);
      worst_value = value;
      worst_bound = bound;
    }
  }
  rep.lhs = worst;
  rep.rhs = 1.0;
  rep.constants = {{"worst_slice", double(worst_slice)},
                   {"sup_value", worst_value},
                   {"sup_bound", worst_bound},
                   {"xi_over_delta", 2.0}};
  return rep.settle();
}

}  // namespace mf
