#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "movingflow/report.hpp"
#include "movingflow/solver.hpp"

namespace mf {

struct ConstantsLedger {
  double alpha = 1.0;
  double p = 2.0;
  double p_prime = 2.0;
  double v_inf = 0.0;
  double div_v_inf = 0.0;
  double f_l1 = 0.0;
  double u0_l1 = 0.0;
  double QT_measure = 0.0;
  double sup_domain_measure = 0.0;
  double theta = 2.0;
  double varrho = 0.0;
  double Theta_C = 1.0;
  double sigma = 0.0;
  double gamma_l1 = 0.0;
  double T = 0.0;
  int dim = 1;

  std::map<std::string, double> as_map() const;
};

ConstantsLedger make_ledger(const MovingDomain& domain, const DiffusionLaw& law, const Nonlinearity& nl,
                            const VelocityField& v, const ProblemData& data);
ConstantsLedger make_ledger(const RunResult& run);

// sup_a (v a - (alpha/2) a^p)
double young_constant(double alpha, double p, double v_inf);
double beta_constant(const ConstantsLedger& c, double T);
// C0 of the band inequality: int_{B_n}|u'|^p <= C0/alpha + (2|v|/alpha) int_{E_n}|u'|
double band_constant(const ConstantsLedger& c, double T);

EstimateReport check_l1_bound(const RunResult& run, const ConstantsLedger& c);
EstimateReport check_band_inequality(const RunResult& run, int n, const ConstantsLedger& c);

struct InterpolationBound {
  double r = 0.0, eta = 0.0, C_gn = 0.0;
  double s_low = 0.0, s_high = 0.0;
  double K = 0.0, delta = 0.0, C_K = 0.0, Lambda = 0.0;
  double q_power_bound = 0.0;  // bound on ||u'||_{L^q(Q_T)}^q
};

// Truncation-interpolation bound on ||u'||_q^q from the L1 bound beta and the band constants C0, C1.
InterpolationBound interpolation_bound(double p, double q, int d, double beta, double C0, double C1, double QT);
// Tail of sum n^{-s} over n > K: direct summation (capped) plus integral remainder.
double zeta_tail(double K, double s, long cap = 1000000);

EstimateReport check_gradient_q_bound(const RunResult& run, double q, const ConstantsLedger& c);
EstimateReport check_nonlinearity_l1(const RunResult& run, const ConstantsLedger& c, int k_split);

struct TailValue {
  double k = 0.0;
  double tail = 0.0;
  double majorant = 0.0;
};
TailValue check_tail(const RunResult& run, double k);
EstimateReport check_tail_sequence(const RunResult& run, const std::vector<double>& ks);

std::vector<EstimateReport> check_equi_integrability(const RunResult& run, const ConstantsLedger& c,
                                                     const std::vector<double>& fractions, int subsets,
                                                     std::uint64_t seed);

struct CauchyMeasure {
  double A = 0.0, A1 = 0.0, A2 = 0.0, A3 = 0.0, A4 = 0.0;
  double maj1 = 0.0, maj2 = 0.0, maj3 = 0.0, maj4 = 0.0;
};
CauchyMeasure gradient_cauchy_measure(const RunResult& a, const RunResult& b, double mu, double k, double delta);

EstimateReport check_flux_integrability(const RunResult& run, double s, const ConstantsLedger& c);

struct TimeContinuity {
  double sup_diff = 0.0;
  double m = 0.0;
  double bound = 0.0;
  std::map<std::string, double> terms;
};
TimeContinuity time_continuity_modulus(const RunResult& a, const RunResult& b);

EstimateReport sobolev_constant_audit(const MovingDomain& domain, double q, double T, int trials, std::uint64_t seed);
EstimateReport aubin_lions_functional(const RunResult& run, int trials, std::uint64_t seed);

// |E_n| <= ||u||_r^r / n^r
EstimateReport check_chebyshev(const RunResult& run, double r, int n);

// Least-squares slope of log(y) against log(x).
double log_slope(const std::vector<double>& x, const std::vector<double>& y);
// Trend of a quantity as eps decreases: slope of log(value) against log(1/eps) must stay <= 0.05.
EstimateReport uniformity_report(const std::string& name, const std::vector<double>& eps,
                                 const std::vector<double>& values);

}  // namespace mf
