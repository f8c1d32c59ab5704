#include "movingflow/flowmap.hpp"

#include <algorithm>
#include <cmath>

#include "movingflow/errors.hpp"

namespace mf {

namespace {

double bump_profile(double s) { return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; }

double bump_slope(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return bump_profile(s) * (-2.0 * s / (q * q));
}

double max_bump_slope() {
  static const double value = [] {
    double m = 0.0;
    const int n = 200000;
    for (int i = 1; i < n; ++i) m = std::max(m, std::abs(bump_slope(-1.0 + 2.0 * i / n)));
    return m;
  }();
  return value;
}

int step_count(double span, double h) { return std::max(1, static_cast<int>(std::ceil(span / h - 1e-9))); }

double velocity_at(const VelocityField& v, double x, double t) {
  const double value = v.eval(x, t);
  if (!std::isfinite(value)) throw EvaluationError("non-finite velocity", x, t);
  return value;
}

// RK4 on x' = v(x,t) with signed span; returns x at t0 + span.
double integrate(const FlowMap& flow, double x, double t0, double t1) {
  if (t1 == t0) return x;
  const int n = step_count(std::abs(t1 - t0), flow.ode_step);
  const double h = (t1 - t0) / n;
  double t = t0;
  for (int i = 0; i < n; ++i) {
    const double k1 = velocity_at(flow.velocity, x, t);
    const double k2 = velocity_at(flow.velocity, x + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = velocity_at(flow.velocity, x + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = velocity_at(flow.velocity, x + h * k3, t + h);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t0 + (i + 1) * h;
  }
  return x;
}

struct State {
  double x, J;
};

State rhs(const FlowMap& flow, State s, double t) {
  const double d = flow.velocity.divergence(s.x, t);
  if (!std::isfinite(d)) throw EvaluationError("non-finite divergence", s.x, t);
  return {velocity_at(flow.velocity, s.x, t), d * s.J};
}

State integrate_jacobian(const FlowMap& flow, State s, double t0, double t1) {
  if (t1 == t0) return s;
  const int n = step_count(t1 - t0, flow.ode_step);
  const double h = (t1 - t0) / n;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + i * h;
    const State k1 = rhs(flow, s, t);
    const State k2 = rhs(flow, {s.x + 0.5 * h * k1.x, s.J + 0.5 * h * k1.J}, t + 0.5 * h);
    const State k3 = rhs(flow, {s.x + 0.5 * h * k2.x, s.J + 0.5 * h * k2.J}, t + 0.5 * h);
    const State k4 = rhs(flow, {s.x + h * k3.x, s.J + h * k3.J}, t + h);
    s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.J += h / 6.0 * (k1.J + 2.0 * k2.J + 2.0 * k3.J + k4.J);
    if (!(s.J > 0.0)) throw DegeneracyError("flow Jacobian lost positivity at t=" + std::to_string(t + h));
  }
  return s;
}

void check_times(double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 >= t0)) throw ParameterError("flow times must satisfy 0 <= t0 <= t1");
}

}  // namespace

VelocityField VelocityField::zero() {
  return {[](double, double) { return 0.0; }, [](double, double) { return 0.0; }, 0.0, 0.0};
}

VelocityField VelocityField::constant(double c) {
  return {[c](double, double) { return c; }, [](double, double) { return 0.0; }, std::abs(c), 0.0};
}

VelocityField VelocityField::linear(double lambda, double lo, double hi) {
  return {[lambda](double x, double) { return lambda * x; }, [lambda](double, double) { return lambda; },
          std::abs(lambda) * std::max(std::abs(lo), std::abs(hi)), std::abs(lambda)};
}

VelocityField VelocityField::compact_bump(double amplitude, double center, double width) {
  if (!(width > 0.0)) throw ParameterError("compact_bump width must be positive");
  return {[=](double x, double) { return amplitude * bump_profile((x - center) / width); },
          [=](double x, double) { return amplitude * bump_slope((x - center) / width) / width; },
          std::abs(amplitude), std::abs(amplitude) * max_bump_slope() / width};
}

std::pair<double, double> sample_sup_norms(const VelocityField& v, Interval box, double T, int samples) {
  double sv = 0.0, sd = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = box.left + box.length() * i / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      const double t = T * j / (samples - 1);
      sv = std::max(sv, std::abs(v.eval(x, t)));
      sd = std::max(sd, std::abs(v.divergence(x, t)));
    }
  }
  return {sv, sd};
}

double forward(const FlowMap& flow, double x, double t0, double t1) {
  check_times(t0, t1);
  return integrate(flow, x, t0, t1);
}

double inverse(const FlowMap& flow, double x, double t0, double t1) {
  check_times(t0, t1);
  return integrate(flow, x, t1, t0);
}

double jacobian_det(const FlowMap& flow, double x, double t) {
  check_times(0.0, t);
  return integrate_jacobian(flow, {x, 1.0}, 0.0, t).J;
}

std::pair<double, double> jacobian_bounds(const FlowMap& flow, const MovingDomain& domain, double T, int samples) {
  if (samples < 2) throw ParameterError("jacobian_bounds needs at least 2 samples");
  double lo = 1.0, hi = 1.0;
  for (int i = 0; i < samples; ++i) {
    State s{domain.initial.left + domain.initial.length() * i / (samples - 1), 1.0};
    double t = 0.0;
    for (int j = 1; j < samples; ++j) {
      const double tn = T * j / (samples - 1);
      s = integrate_jacobian(flow, s, t, tn);
      t = tn;
      lo = std::min(lo, s.J);
      hi = std::max(hi, s.J);
    }
  }
  return {lo, hi};
}

Interval domain_at(const MovingDomain& domain, double t) {
  const Interval out{forward(domain.flow, domain.initial.left, 0.0, t),
                     forward(domain.flow, domain.initial.right, 0.0, t)};
  if (!(out.left < out.right)) throw DegeneracyError("moving domain endpoints crossed at t=" + std::to_string(t));
  return out;
}

}  // namespace mf
