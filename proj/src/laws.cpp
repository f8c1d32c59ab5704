#include "movingflow/laws.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "movingflow/mesh.hpp"
#include "movingflow/random.hpp"
#include "movingflow/truncation.hpp"

namespace mf {

namespace {

double relative_margin(double lhs, double rhs) { return (rhs - lhs) / std::max(1.0, std::abs(rhs)); }

double draw_gradient(Rng& rng, double R) {
  if (rng.uniform() < 0.5) return rng.uniform(-R, R);
  const double mag = std::exp(rng.uniform(std::log(1e-6), std::log(R)));
  return rng.uniform() < 0.5 ? -mag : mag;
}

}  // namespace

DiffusionLaw DiffusionLaw::p_laplace(double p, double theta, double varrho, double Theta_C, double newton_eta) {
  DiffusionLaw law;
  law.p = p;
  law.alpha = 1.0;
  law.K = 1.0;
  law.theta = theta;
  law.varrho = varrho;
  law.Theta_C = Theta_C;
  law.newton_eta = newton_eta;
  law.flux = [p](double, double, double xi) { return p_laplace_flux(p, xi); };
  return law;
}

void DiffusionLaw::validate() const {
  const double d = dim;
  if (!(p > (2.0 * d + 1.0) / (d + 1.0))) throw ParameterError("law: p must exceed (2d+1)/(d+1)");
  if (!(alpha > 0.0)) throw ParameterError("law: alpha must be positive");
  if (!(K >= 0.0)) throw ParameterError("law: K must be nonnegative");
  if (!(theta > 1.0)) throw ParameterError("law: theta must exceed 1");
  if (!(varrho >= 0.0) || !(varrho < (theta - 1.0) * (p - d / (d + 1.0))))
    throw ParameterError("law: varrho must lie in [0, (theta-1)(p-d/(d+1)))");
  if (!(Theta_C > 0.0)) throw ParameterError("law: Theta_C must be positive");
  if (!(newton_eta > 0.0)) throw ParameterError("law: newton_eta must be positive");
  if (!flux) throw ParameterError("law: flux is not set");
}

double regularized_flux(const DiffusionLaw& law, double xi) { return smoothed_flux(law.p, law.newton_eta, xi); }

double regularized_flux_slope(const DiffusionLaw& law, double xi) {
  return smoothed_flux_slope(law.p, law.newton_eta, xi);
}

AssumptionReport check_assumptions(const DiffusionLaw& law, int samples, std::uint64_t seed, Interval box, double T,
                                   double R) {
  if (samples < 1) throw ParameterError("check_assumptions: samples must be >= 1");
  AssumptionReport rep;
  try {
    law.validate();
  } catch (const ParameterError& e) {
    rep.structural_ok = false;
    rep.structural_note = e.what();
  }
  rep.growth_margin = rep.coercivity_margin = rep.monotonicity_margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const double x = rng.uniform(box.left, box.right);
    const double t = rng.uniform(0.0, T);
    const double xi = draw_gradient(rng, R);
    const double xj = draw_gradient(rng, R);
    const double a = law.flux(x, t, xi);
    const double b = law.flux(x, t, xj);
    if (law.flux(x, t, 0.0) != 0.0) {
      rep.structural_ok = false;
      rep.structural_note = "flux(x,t,0) != 0";
    }
    const double bound = law.phi_growth(x, t) + law.K * std::pow(std::abs(xi), law.p - 1.0);
    rep.growth_margin = std::min(rep.growth_margin, relative_margin(std::abs(a), bound));
    rep.coercivity_margin =
        std::min(rep.coercivity_margin, relative_margin(law.alpha * std::pow(std::abs(xi), law.p), a * xi));
    const double Theta = law.Theta_C * std::pow(1.0 + std::abs(xi) + std::abs(xj), law.varrho);
    const double floor = std::pow(std::abs(xi - xj), law.theta) / Theta;
    rep.monotonicity_margin = std::min(rep.monotonicity_margin, relative_margin(floor, (a - b) * (xi - xj)));
  }
  rep.pass = rep.structural_ok && rep.growth_margin >= -1e-10 && rep.coercivity_margin >= -1e-10 &&
             rep.monotonicity_margin >= -1e-10;
  return rep;
}

Nonlinearity Nonlinearity::none() {
  Nonlinearity nl;
  nl.g = [](double, double, double, double) { return 0.0; };
  nl.h = [](double) { return 0.0; };
  nl.gamma = [](double, double) { return 0.0; };
  nl.sigma = 0.0;
  return nl;
}

Nonlinearity Nonlinearity::power(double C, int k, double sigma, double gamma) {
  if (k < 0) throw ParameterError("power nonlinearity: k must be >= 0");
  if (!(C >= 0.0) || !(gamma >= 0.0) || !(sigma >= 0.0))
    throw ParameterError("power nonlinearity: C, gamma, sigma must be nonnegative");
  const int m = 2 * k + 1;
  Nonlinearity nl;
  nl.g = [=](double, double, double lambda, double xi) {
    return C * std::pow(lambda, m) * (gamma + std::pow(std::abs(xi), sigma));
  };
  nl.h = [=](double s) { return C * std::pow(s, m); };
  nl.gamma = [gamma](double, double) { return gamma; };
  nl.sigma = sigma;
  return nl;
}

NonlinearityReport check_nonlinearity(const Nonlinearity& nl, double p, int samples, std::uint64_t seed, Interval box,
                                      double T, double R) {
  NonlinearityReport rep;
  rep.sign_margin = rep.growth_margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const double x = rng.uniform(box.left, box.right);
    const double t = rng.uniform(0.0, T);
    const double lambda = rng.uniform(-R, R);
    const double xi = rng.uniform(-R, R);
    const double g = nl.g(x, t, lambda, xi);
    rep.sign_margin = std::min(rep.sign_margin, lambda * g / std::max(1.0, std::abs(lambda * g)));
    const double bound = nl.h(std::abs(lambda)) * (nl.gamma(x, t) + std::pow(std::abs(xi), nl.sigma));
    rep.growth_margin = std::min(rep.growth_margin, relative_margin(std::abs(g), bound));
  }
  rep.pass = rep.sign_margin >= -1e-10 && rep.growth_margin >= -1e-10 && nl.sigma >= 0.0 && nl.sigma < p;
  return rep;
}

double regularize_g(const Nonlinearity& nl, double eps, double x, double t, double lambda, double xi) {
  return regularize_value(nl.g(x, t, lambda, xi), eps);
}

RegularizedData regularize_data(const ProblemData& data, double eps) {
  if (!(eps > 0.0)) throw ParameterError("regularize_data: eps must be positive");
  const double k = 1.0 / eps;
  auto f = data.f;
  auto u0 = data.u0;
  return {[f, k](double x, double t) { return T_k(k, f(x, t)); }, [u0, k](double x) { return T_k(k, u0(x)); }};
}

double u0_l1(const ProblemData& data, Interval omega0) {
  if (data.u0_abs_integral) return data.u0_abs_integral(omega0.left, omega0.right);
  const auto u0 = data.u0;
  return integrate_1d([&](double x) { return std::abs(u0(x)); }, omega0.left, omega0.right, 256);
}

double f_l1(const ProblemData& data, const MovingDomain& domain) {
  const int cells = 64;
  double total = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double a = data.T * c / cells, b = data.T * (c + 1) / cells;
    for (int g = 0; g < 3; ++g) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * gauss3::nodes[g];
      const Interval I = domain_at(domain, t);
      const double inner =
          data.f_abs_integral
              ? data.f_abs_integral(I.left, I.right, t)
              : integrate_1d([&](double x) { return std::abs(data.f(x, t)); }, I.left, I.right, 16);
      total += 0.5 * (b - a) * gauss3::weights[g] * inner;
    }
  }
  return total;
}

double u0_truncation_gap(const ProblemData& data, double eps, Interval omega0) {
  const double k = 1.0 / eps;
  return integrate_1d([&](double x) { const double u = data.u0(x); return std::abs(T_k(k, u) - u); }, omega0.left,
                      omega0.right, 256);
}

}  // namespace mf
