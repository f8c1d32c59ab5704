#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <limits>
#include <vector>

#include "movingflow/flowmap.hpp"

namespace mf {

namespace gauss3 {
inline constexpr std::array<double, 3> nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
inline constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
}  // namespace gauss3

struct Mesh {
  Eigen::VectorXd nodes;
  double h = 0.0;

  int elements() const { return static_cast<int>(nodes.size()) - 1; }
  double length(int e) const { return nodes[e + 1] - nodes[e]; }
  Interval interval() const { return {nodes[0], nodes[nodes.size() - 1]}; }
  // Physical Gauss point g of element e.
  double gauss_x(int e, int g) const {
    return 0.5 * (nodes[e] + nodes[e + 1]) + 0.5 * length(e) * gauss3::nodes[g];
  }
  double gauss_w(int e, int g) const { return 0.5 * length(e) * gauss3::weights[g]; }
  int locate(double x) const;
};

Mesh build_mesh(Interval interval, double h_target);

struct Field {
  Mesh mesh;
  Eigen::VectorXd values;
  double time = 0.0;

  double eval(double x) const;
  double slope(int e) const { return (values[e + 1] - values[e]) / mesh.length(e); }
  double at_gauss(int e, int g) const {
    const double s = 0.5 * (1.0 + gauss3::nodes[g]);
    return (1.0 - s) * values[e] + s * values[e + 1];
  }
};

Field zero_field(const Mesh& mesh, double time);
// boundary nodes stay 0
Field interpolate(const Mesh& mesh, const SpaceFn& fn, double time);

// Trapezoid weights every stored level; BackwardEuler gives each level the step that ends at it.
enum class TimeRule { Trapezoid, BackwardEuler };

struct Slice {
  double t_begin = 0.0;
  double t_end = 0.0;
  Mesh mesh;
  std::vector<Field> steps;

  double time_weight(std::size_t k, TimeRule rule = TimeRule::Trapezoid) const;
};

struct SpaceTimeField {
  std::vector<Slice> slices;
  FlowMap flow;

  double horizon() const { return slices.empty() ? 0.0 : slices.back().t_end; }
  std::size_t step_count() const;
};

double lp_norm(const Field& field, double p);
double w1q_seminorm(const Field& field, double q);
double sup_norm(const Field& field);

enum class SpatialNorm { Lebesgue, GradientLebesgue };

inline constexpr double kSupTime = std::numeric_limits<double>::infinity();

// (int_0^T ||u(t)||^q_time dt)^(1/q_time) by the trapezoidal rule per slice; q_time = kSupTime gives the max.
double spacetime_norm(const SpaceTimeField& field, double q_time, SpatialNorm kind, double q_space);

// L^p(Q_T) distance to a reference function with the same quadrature.
double spacetime_error(const SpaceTimeField& field, const SpaceTimeFn& exact, double p);

Field transfer_field(const Field& field, const Mesh& target, const FlowMap& flow, double t_from, double t_to);
// same point, zero outside the source interval
Field restrict_field(const Field& field, const Mesh& target, double t);

struct QuadPoint {
  int slice, step, element, gauss;
  double x, t, weight, u, du;
};

template <class F>
void for_each_point(const SpaceTimeField& field, F&& visit, TimeRule rule = TimeRule::Trapezoid) {
  for (std::size_t j = 0; j < field.slices.size(); ++j) {
    const Slice& s = field.slices[j];
    for (std::size_t k = 0; k < s.steps.size(); ++k) {
      const double wt = s.time_weight(k, rule);
      const Field& f = s.steps[k];
      for (int e = 0; e < s.mesh.elements(); ++e) {
        const double du = f.slope(e);
        for (int g = 0; g < 3; ++g)
          visit(QuadPoint{static_cast<int>(j), static_cast<int>(k), e, g, s.mesh.gauss_x(e, g), f.time,
                          wt * s.mesh.gauss_w(e, g), f.at_gauss(e, g), du});
      }
    }
  }
}

// Tanh-sinh quadrature on equal subintervals; tolerates integrable endpoint singularities.
double integrate_1d(const std::function<double(double)>& fn, double a, double b, int pieces = 64);

}  // namespace mf
