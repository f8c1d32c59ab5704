#include "movingflow/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "movingflow/errors.hpp"

namespace mf {

Mesh build_mesh(Interval interval, double h_target) {
  if (!(interval.right > interval.left)) throw ParameterError("build_mesh: degenerate interval");
  if (!(h_target > 0.0)) throw ParameterError("build_mesh: h_target must be positive");
  const int n = std::max(1, static_cast<int>(std::ceil(interval.length() / h_target - 1e-12)));
  Mesh m;
  m.nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) m.nodes[i] = interval.left + interval.length() * i / n;
  m.nodes[n] = interval.right;
  m.h = interval.length() / n;
  return m;
}

int Mesh::locate(double x) const {
  const int n = elements();
  int e = static_cast<int>(std::floor((x - nodes[0]) / (nodes[n] - nodes[0]) * n));
  e = std::clamp(e, 0, n - 1);
  while (e > 0 && x < nodes[e]) --e;
  while (e < n - 1 && x > nodes[e + 1]) ++e;
  return e;
}

double Field::eval(double x) const {
  const int n = mesh.elements();
  if (x < mesh.nodes[0] || x > mesh.nodes[n]) return 0.0;
  const int e = mesh.locate(x);
  const double s = (x - mesh.nodes[e]) / mesh.length(e);
  return (1.0 - s) * values[e] + s * values[e + 1];
}

Field zero_field(const Mesh& mesh, double time) { return {mesh, Eigen::VectorXd::Zero(mesh.nodes.size()), time}; }

Field interpolate(const Mesh& mesh, const SpaceFn& fn, double time) {
  Field f = zero_field(mesh, time);
  for (int i = 1; i < mesh.elements(); ++i) f.values[i] = fn(mesh.nodes[i]);
  return f;
}

double Slice::time_weight(std::size_t k, TimeRule rule) const {
  const std::size_t m = steps.size();
  if (m < 2) return 0.0;
  if (rule == TimeRule::BackwardEuler) return k == 0 ? 0.0 : steps[k].time - steps[k - 1].time;
  if (k == 0) return 0.5 * (steps[1].time - steps[0].time);
  if (k == m - 1) return 0.5 * (steps[m - 1].time - steps[m - 2].time);
  return 0.5 * (steps[k + 1].time - steps[k - 1].time);
}

std::size_t SpaceTimeField::step_count() const {
  std::size_t n = 0;
  for (const auto& s : slices) n += s.steps.size();
  return n;
}

double lp_norm(const Field& field, double p) {
  if (!(p >= 1.0)) throw ParameterError("lp_norm: p must be >= 1");
  double acc = 0.0;
  for (int e = 0; e < field.mesh.elements(); ++e)
    for (int g = 0; g < 3; ++g) acc += field.mesh.gauss_w(e, g) * std::pow(std::abs(field.at_gauss(e, g)), p);
  return std::pow(acc, 1.0 / p);
}

double w1q_seminorm(const Field& field, double q) {
  if (!(q >= 1.0)) throw ParameterError("w1q_seminorm: q must be >= 1");
  double acc = 0.0;
  for (int e = 0; e < field.mesh.elements(); ++e) acc += std::pow(std::abs(field.slope(e)), q) * field.mesh.length(e);
  return std::pow(acc, 1.0 / q);
}

double sup_norm(const Field& field) { return field.values.size() ? field.values.cwiseAbs().maxCoeff() : 0.0; }

double spacetime_norm(const SpaceTimeField& field, double q_time, SpatialNorm kind, double q_space) {
  if (!(q_time >= 1.0)) throw ParameterError("spacetime_norm: q_time must be >= 1");
  const bool sup = std::isinf(q_time);
  double acc = 0.0;
  for (const Slice& s : field.slices)
    for (std::size_t k = 0; k < s.steps.size(); ++k) {
      const double n =
          kind == SpatialNorm::Lebesgue ? lp_norm(s.steps[k], q_space) : w1q_seminorm(s.steps[k], q_space);
      if (sup)
        acc = std::max(acc, n);
      else
        acc += s.time_weight(k) * std::pow(n, q_time);
    }
  return sup ? acc : std::pow(acc, 1.0 / q_time);
}

double spacetime_error(const SpaceTimeField& field, const SpaceTimeFn& exact, double p) {
  double acc = 0.0;
  for_each_point(field, [&](const QuadPoint& q) { acc += q.weight * std::pow(std::abs(q.u - exact(q.x, q.t)), p); });
  return std::pow(acc, 1.0 / p);
}

Field transfer_field(const Field& field, const Mesh& target, const FlowMap& flow, double t_from, double t_to) {
  Field out = zero_field(target, t_to);
  const Interval src = field.mesh.interval();
  for (int i = 1; i < target.elements(); ++i) {
    const double y = inverse(flow, target.nodes[i], t_from, t_to);
    out.values[i] = (y < src.left || y > src.right) ? 0.0 : field.eval(y);
  }
  return out;
}

Field restrict_field(const Field& field, const Mesh& target, double t) {
  Field out = zero_field(target, t);
  const Interval src = field.mesh.interval();
  for (int i = 1; i < target.elements(); ++i) {
    const double y = target.nodes[i];
    out.values[i] = (y < src.left || y > src.right) ? 0.0 : field.eval(y);
  }
  return out;
}

double integrate_1d(const std::function<double(double)>& fn, double a, double b, int pieces) {
  constexpr double h = 1.0 / 16.0;
  constexpr int levels = 56;
  constexpr double half_pi = 1.5707963267948966;
  double total = 0.0;
  for (int piece = 0; piece < pieces; ++piece) {
    const double lo = a + (b - a) * piece / pieces;
    const double hi = a + (b - a) * (piece + 1) / pieces;
    const double r = 0.5 * (hi - lo);
    double acc = half_pi * fn(lo + r);
    for (int k = 1; k <= levels; ++k) {
      const double t = k * h;
      const double u = half_pi * std::sinh(t);
      const double w = half_pi * std::cosh(t) / (std::cosh(u) * std::cosh(u));
      const double gap = r * 2.0 / (1.0 + std::exp(2.0 * u));
      if (!(gap > 0.0) || w < 1e-300 || hi - gap == hi || lo + gap == lo) break;
      acc += w * (fn(hi - gap) + fn(lo + gap));
    }
    total += acc * h * r;
  }
  return total;
}

}  // namespace mf
