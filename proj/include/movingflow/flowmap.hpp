#pragma once

#include <functional>
#include <utility>

namespace mf {

using SpaceTimeFn = std::function<double(double x, double t)>;
using SpaceFn = std::function<double(double x)>;

struct Interval {
  double left = 0.0;
  double right = 1.0;
  double length() const { return right - left; }
};

struct VelocityField {
  SpaceTimeFn eval;
  SpaceTimeFn divergence;
  double sup_norm = 0.0;
  double sup_div_norm = 0.0;

  // Builtin presets. Sup norms are taken over the hold-all box [lo, hi].
  static VelocityField zero();
  static VelocityField constant(double c);
  static VelocityField linear(double lambda, double lo, double hi);
  static VelocityField compact_bump(double amplitude, double center, double width);
};

// Max of |v| and |div v| over a sampled box, used to refresh sup norms of custom fields.
std::pair<double, double> sample_sup_norms(const VelocityField& v, Interval box, double T, int samples = 401);

struct FlowMap {
  VelocityField velocity;
  double ode_step = 1e-3;
};

struct MovingDomain {
  Interval initial;
  FlowMap flow;
};

double forward(const FlowMap& flow, double x, double t0, double t1);
double inverse(const FlowMap& flow, double x, double t0, double t1);
double jacobian_det(const FlowMap& flow, double x, double t);
std::pair<double, double> jacobian_bounds(const FlowMap& flow, const MovingDomain& domain, double T, int samples);
Interval domain_at(const MovingDomain& domain, double t);

}  // namespace mf
