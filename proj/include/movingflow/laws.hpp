#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "movingflow/errors.hpp"
#include "movingflow/flowmap.hpp"

namespace mf {

template <class S>
S p_laplace_flux(S p, S xi) {
  if (!(p > S(1))) throw ParameterError("p_laplace_flux: p must exceed 1");
  if (xi == S(0)) return S(0);
  return std::pow(std::abs(xi), p - S(2)) * xi;
}

// (eta^2 + xi^2)^((p-2)/2) xi and its derivative in xi.
template <class S>
S smoothed_flux(S p, S eta, S xi) {
  if (eta == S(0)) return p_laplace_flux(p, xi);
  return std::pow(eta * eta + xi * xi, (p - S(2)) / S(2)) * xi;
}

template <class S>
S smoothed_flux_slope(S p, S eta, S xi) {
  const S r = eta * eta + xi * xi;
  if (r == S(0)) return p == S(2) ? S(1) : S(0);
  return std::pow(r, (p - S(4)) / S(2)) * (eta * eta + (p - S(1)) * xi * xi);
}

template <class S>
S regularize_value(S g, S eps) {
  if (!(eps > S(0))) throw ParameterError("regularization eps must be positive");
  return g / (S(1) + eps * std::abs(g));
}

using FluxFn = std::function<double(double x, double t, double xi)>;
using ReactionFn = std::function<double(double x, double t, double lambda, double xi)>;

struct DiffusionLaw {
  double p = 2.0;
  double alpha = 1.0;
  double K = 1.0;
  SpaceTimeFn phi_growth = [](double, double) { return 0.0; };
  double theta = 2.0;
  double varrho = 0.0;
  double Theta_C = 1.0;
  FluxFn flux;
  double newton_eta = 1e-6;
  int dim = 1;

  static DiffusionLaw p_laplace(double p, double theta, double varrho, double Theta_C, double newton_eta);
  // Throws ParameterError when a structural constraint on the constants fails.
  void validate() const;
};

double regularized_flux(const DiffusionLaw& law, double xi);
double regularized_flux_slope(const DiffusionLaw& law, double xi);

struct AssumptionReport {
  double growth_margin = 0.0;
  double coercivity_margin = 0.0;
  double monotonicity_margin = 0.0;
  bool structural_ok = true;
  std::string structural_note;
  bool pass = true;
};

// Worst relative margins of the growth, coercivity and monotonicity inequalities on seeded samples.
AssumptionReport check_assumptions(const DiffusionLaw& law, int samples, std::uint64_t seed, Interval box = {0.0, 1.0},
                                   double T = 1.0, double R = 1e3);

struct Nonlinearity {
  ReactionFn g;
  std::function<double(double)> h;
  SpaceTimeFn gamma;
  double sigma = 0.0;

  static Nonlinearity none();
  // C * lambda^(2k+1) * (gamma + |xi|^sigma) with constant gamma.
  static Nonlinearity power(double C, int k, double sigma, double gamma);
};

struct NonlinearityReport {
  double sign_margin = 0.0;
  double growth_margin = 0.0;
  bool pass = true;
};

NonlinearityReport check_nonlinearity(const Nonlinearity& nl, double p, int samples, std::uint64_t seed,
                                      Interval box = {0.0, 1.0}, double T = 1.0, double R = 10.0);

double regularize_g(const Nonlinearity& nl, double eps, double x, double t, double lambda, double xi);

struct ProblemData {
  SpaceTimeFn f = [](double, double) { return 0.0; };
  SpaceFn u0 = [](double) { return 0.0; };
  double T = 1.0;
  // Optional closed forms of int_l^r |f(x,t)| dx and int_l^r |u0| dx.
  std::function<double(double l, double r, double t)> f_abs_integral;
  std::function<double(double l, double r)> u0_abs_integral;
};

struct RegularizedData {
  SpaceTimeFn f_eps;
  SpaceFn u0_eps;
};

RegularizedData regularize_data(const ProblemData& data, double eps);

double u0_l1(const ProblemData& data, Interval omega0);
double f_l1(const ProblemData& data, const MovingDomain& domain);
// ||T_{1/eps}(u0) - u0||_{L1(omega0)}
double u0_truncation_gap(const ProblemData& data, double eps, Interval omega0);

}  // namespace mf
