#include "movingflow/mollify.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>

#include "movingflow/errors.hpp"

namespace mf {

namespace {

double bump_profile(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

const GaussRule& rule64() {
  static const GaussRule r = gauss_legendre(64);
  return r;
}

const GaussRule& rule32() {
  static const GaussRule r = gauss_legendre(32);
  return r;
}

double unit_mass() {
  static const double m = [] {
    double acc = 0.0;
    const GaussRule& r = rule64();
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * bump_profile(r.nodes[i]);
    return acc;
  }();
  return m;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ParameterError("gauss_legendre: n must be positive");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

double BumpKernel::operator()(double y) const { return normalization * bump_profile(y / rho); }

BumpKernel make_kernel(double rho) {
  if (!(rho > 0.0)) throw ParameterError("make_kernel: rho must be positive");
  return BumpKernel{rho, 1.0 / (rho * unit_mass())};
}

double kernel_first_moment() {
  static const double m = [] {
    // |s| phi(s) on [0, 1], doubled.
    double acc = 0.0;
    const GaussRule& r = rule64();
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double s = 0.5 * (1.0 + r.nodes[i]);
      acc += 0.5 * r.weights[i] * s * bump_profile(s);
    }
    return 2.0 * acc / unit_mass();
  }();
  return m;
}

Interval shrink_domain(Interval interval, double delta) {
  if (!(delta >= 0.0)) throw ParameterError("shrink_domain: delta must be nonnegative");
  if (!(interval.length() > 2.0 * delta)) throw DegeneracyError("shrink_domain: interval vanishes");
  return {interval.left + delta, interval.right - delta};
}

double convolve_at(const Field& field, const BumpKernel& kernel, double x) {
  const GaussRule& r = rule32();
  double acc = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double y = kernel.rho * r.nodes[i];
    const double w = kernel.rho * r.weights[i] * kernel(y);
    acc += w * field.eval(x - y);
    mass += w;
  }
  // discrete mass, so constants are reproduced exactly
  return acc / mass;
}

Field convolve_interior(const Field& field, const BumpKernel& kernel, double delta) {
  if (kernel.rho > delta) throw ParameterError("convolve_interior: kernel radius exceeds delta");
  const Mesh mesh = build_mesh(shrink_domain(field.mesh.interval(), delta), field.mesh.h);
  Field out{mesh, Eigen::VectorXd(mesh.nodes.size()), field.time};
  for (Eigen::Index i = 0; i < mesh.nodes.size(); ++i) out.values[i] = convolve_at(field, kernel, mesh.nodes[i]);
  return out;
}

EstimateReport mollify_convergence_audit(const SpaceTimeField& field, double p, double delta,
                                         const std::vector<double>& rho_grid) {
  if (!(p >= 1.0)) throw ParameterError("mollify audit: p must be >= 1");
  if (rho_grid.empty()) throw ParameterError("mollify audit: empty rho grid");
  for (double rho : rho_grid)
    if (!(rho > 0.0) || rho > delta) throw ParameterError("mollify audit: every rho must lie in (0, delta]");
  std::vector<double> rhos = rho_grid;
  std::sort(rhos.begin(), rhos.end(), std::greater<>());

  double grad_pp = 0.0;
  for_each_point(field, [&](const QuadPoint& q) { grad_pp += q.weight * std::pow(std::abs(q.du), p); });
  const double grad = std::pow(grad_pp, 1.0 / p);
  const double M1 = kernel_first_moment();

  EstimateReport rep;
  rep.name = "mollifier";
  rep.constants = {{"M1", M1}, {"gradient_lp", grad}, {"delta", delta}, {"p", p}};
  double worst_ratio = 0.0, prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (double rho : rhos) {
    const BumpKernel ker = make_kernel(rho);
    double acc = 0.0;
    for (const Slice& s : field.slices) {
      const Mesh inner = build_mesh(shrink_domain(s.mesh.interval(), delta), s.mesh.h);
      for (std::size_t k = 0; k < s.steps.size(); ++k) {
        const double wt = s.time_weight(k);
        if (wt == 0.0) continue;
        const Field& u = s.steps[k];
        double level = 0.0;
        for (int e = 0; e < inner.elements(); ++e)
          for (int g = 0; g < 3; ++g) {
            const double x = inner.gauss_x(e, g);
            level += inner.gauss_w(e, g) * std::pow(std::abs(convolve_at(u, ker, x) - u.eval(x)), p);
          }
        acc += wt * level;
      }
    }
    const double err = std::pow(acc, 1.0 / p);
    const double bound = grad * rho * M1;
    const std::string tag = std::to_string(rho).substr(0, 6);
    rep.constants["e_rho_" + tag] = err;
    rep.constants["bound_rho_" + tag] = bound;
    if (err > prev + 1e-10) monotone = false;
    prev = err;
    worst_ratio = std::max(worst_ratio, bound > 0.0 ? err / bound : (err > 1e-12 ? 2.0 : 0.0));
  }
  rep.lhs = worst_ratio;
  rep.rhs = 1.0;
  rep.constants["monotone"] = monotone ? 1.0 : 0.0;
  rep.pass = monotone && EstimateReport::holds(rep.lhs, rep.rhs);
  return rep;
}

}  // namespace mf
