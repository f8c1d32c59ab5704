#include "movingflow/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "movingflow/errors.hpp"
#include "movingflow/random.hpp"
#include "movingflow/truncation.hpp"

namespace mf {

namespace {

constexpr TimeRule kRule = TimeRule::BackwardEuler;

double g_eps(const RunResult& run, const QuadPoint& q) {
  return regularize_g(run.nl, run.eps, q.x, q.t, q.u, q.du);
}

// Gauss-3 composite rule on [a,b].
template <class F>
double gauss_composite(F&& fn, double a, double b, int cells) {
  double acc = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double lo = a + (b - a) * c / cells, hi = a + (b - a) * (c + 1) / cells;
    for (int g = 0; g < 3; ++g) acc += 0.5 * (hi - lo) * gauss3::weights[g] * fn(0.5 * (lo + hi) + 0.5 * (hi - lo) * gauss3::nodes[g]);
  }
  return acc;
}

struct PairedPoints {
  std::vector<QuadPoint> a, b;
};

PairedPoints pair_points(const RunResult& ra, const RunResult& rb) {
  PairedPoints pp;
  for_each_point(ra.solution, [&](const QuadPoint& q) { pp.a.push_back(q); }, kRule);
  for_each_point(rb.solution, [&](const QuadPoint& q) { pp.b.push_back(q); }, kRule);
  if (pp.a.size() != pp.b.size()) throw ParameterError("paired audit: runs do not share a grid");
  for (std::size_t i = 0; i < pp.a.size(); ++i)
    if (std::abs(pp.a[i].x - pp.b[i].x) > 1e-12 || std::abs(pp.a[i].t - pp.b[i].t) > 1e-12)
      throw ParameterError("paired audit: runs do not share a grid");
  return pp;
}

struct BandIntegrals {
  double B_grad_p = 0.0;  // int_{B_n} |u'|^p
  double B_measure = 0.0;
  double E_grad = 0.0;  // int_{E_n} |u'|
};

BandIntegrals band_integrals(const RunResult& run, int n, double p) {
  BandIntegrals bi;
  for_each_point(run.solution, [&](const QuadPoint& q) {
    if (in_band(n, q.u)) {
      bi.B_grad_p += q.weight * std::pow(std::abs(q.du), p);
      bi.B_measure += q.weight;
    } else if (above_band(n, q.u)) {
      bi.E_grad += q.weight * std::abs(q.du);
    }
  }, kRule);
  return bi;
}

double initial_gap(const RunResult& a, const RunResult& b) {
  const Field& fa = a.solution.slices.front().steps.front();
  const Field& fb = b.solution.slices.front().steps.front();
  Field diff = fa;
  diff.values = fa.values - fb.values;
  return lp_norm(diff, 1.0);
}

double sup_slice_measure(const RunResult& run) {
  double m = 0.0;
  for (const auto& I : run.grid.domains) m = std::max(m, I.length());
  return m;
}

}  // namespace

std::map<std::string, double> ConstantsLedger::as_map() const {
  return {{"alpha", alpha},       {"p", p},         {"p_prime", p_prime},     {"v_inf", v_inf},
          {"div_v_inf", div_v_inf}, {"f_l1", f_l1},   {"u0_l1", u0_l1},         {"QT_measure", QT_measure},
          {"sup_domain_measure", sup_domain_measure}, {"theta", theta},         {"varrho", varrho},
          {"Theta_C", Theta_C},   {"sigma", sigma}, {"gamma_l1", gamma_l1},   {"T", T}};
}

ConstantsLedger make_ledger(const MovingDomain& domain, const DiffusionLaw& law, const Nonlinearity& nl,
                            const VelocityField& v, const ProblemData& data) {
  ConstantsLedger c;
  c.alpha = law.alpha;
  c.p = law.p;
  c.p_prime = law.p / (law.p - 1.0);
  c.v_inf = v.sup_norm;
  c.div_v_inf = v.sup_div_norm;
  c.theta = law.theta;
  c.varrho = law.varrho;
  c.Theta_C = law.Theta_C;
  c.sigma = nl.sigma;
  c.T = data.T;
  c.dim = law.dim;
  c.u0_l1 = u0_l1(data, domain.initial);
  c.f_l1 = f_l1(data, domain);
  c.QT_measure = gauss_composite([&](double t) { return domain_at(domain, t).length(); }, 0.0, data.T, 64);
  for (int i = 0; i <= 256; ++i)
    c.sup_domain_measure = std::max(c.sup_domain_measure, domain_at(domain, data.T * i / 256).length());
  c.gamma_l1 = gauss_composite(
      [&](double t) {
        const Interval I = domain_at(domain, t);
        return gauss_composite([&](double x) { return std::abs(nl.gamma(x, t)); }, I.left, I.right, 64);
      },
      0.0, data.T, 32);
  return c;
}

ConstantsLedger make_ledger(const RunResult& run) { return make_ledger(run.domain, run.law, run.nl, run.v, run.data); }

double young_constant(double alpha, double p, double v_inf) {
  const double pp = p / (p - 1.0);
  return std::pow(v_inf, pp) / pp * std::pow(2.0 / (alpha * p), pp / p);
}

double beta_constant(const ConstantsLedger& c, double T) {
  return c.sup_domain_measure + c.u0_l1 + c.f_l1 + T * young_constant(c.alpha, c.p, c.v_inf) * c.QT_measure;
}

double band_constant(const ConstantsLedger& c, double T) {
  const double beta = beta_constant(c, T);
  return 2.0 * (c.u0_l1 + c.f_l1 + young_constant(c.alpha, c.p, c.v_inf) * c.QT_measure + c.div_v_inf * T * beta);
}

EstimateReport check_l1_bound(const RunResult& run, const ConstantsLedger& c) {
  EstimateReport rep;
  rep.name = "l1_bound";
  rep.lhs = spacetime_norm(run.solution, kSupTime, SpatialNorm::Lebesgue, 1.0);
  rep.rhs = beta_constant(c, c.T);
  rep.constants = c.as_map();
  rep.constants["C_young"] = young_constant(c.alpha, c.p, c.v_inf);
  rep.constants["beta"] = rep.rhs;
  return rep.settle();
}

EstimateReport check_band_inequality(const RunResult& run, int n, const ConstantsLedger& c) {
  if (n < 0) throw ParameterError("band index must be nonnegative");
  const BandIntegrals bi = band_integrals(run, n, c.p);
  const double C0 = band_constant(c, c.T);
  EstimateReport rep;
  rep.name = "band[n=" + std::to_string(n) + "]";
  rep.lhs = bi.B_grad_p;
  rep.rhs = C0 / c.alpha + 2.0 * c.v_inf / c.alpha * bi.E_grad;
  rep.constants = {{"C0", C0},
                   {"C_young", young_constant(c.alpha, c.p, c.v_inf)},
                   {"beta", beta_constant(c, c.T)},
                   {"alpha", c.alpha},
                   {"v_inf", c.v_inf},
                   {"div_v_inf", c.div_v_inf},
                   {"u0_l1", c.u0_l1},
                   {"f_l1", c.f_l1},
                   {"QT_measure", c.QT_measure},
                   {"E_grad_integral", bi.E_grad},
                   {"B_measure", bi.B_measure},
                   {"n", double(n)}};
  return rep.settle();
}

double zeta_tail(double K, double s, long cap) {
  if (!(s > 1.0)) throw ParameterError("zeta_tail: exponent must exceed 1");
  double acc = 0.0;
  for (long i = cap; i >= 1; --i) acc += std::pow(K + static_cast<double>(i), -s);
  const double last = K + static_cast<double>(cap);
  return acc + std::pow(last, 1.0 - s) / (s - 1.0);
}

InterpolationBound interpolation_bound(double p, double q, int d, double beta, double C0, double C1, double QT) {
  if (d != 1) throw ParameterError("interpolation_bound: only d = 1 is implemented");
  if (!(q >= 1.0) || !(q < p - double(d) / (d + 1.0)))
    throw ParameterError("gradient bound: q must satisfy 1 <= q < p - d/(d+1)");
  InterpolationBound ib;
  ib.r = q * (d + 1.0) / d;
  ib.eta = 0.5;
  // ||u||_inf^{(2q-1)/q} <= ((2q-1)/(2q)) ||u'||_q ||u||_1^{(q-1)/q} for u vanishing at both ends.
  ib.C_gn = std::pow((2.0 * q - 1.0) / (2.0 * q), q / (2.0 * q - 1.0));
  ib.s_low = ib.r * (p - q) / q;
  ib.s_high = ib.r * (p - 1.0) / q;
  if (!(ib.s_low > 1.0)) throw ParameterError("gradient bound: series exponent r(p-q)/q must exceed 1");
  const double e = q / p;
  ib.Lambda = (2.0 * p - q - 1.0) / p * std::pow(beta, q) * std::pow(ib.C_gn, 2.0 * q - 1.0) + 1.0 / p;
  auto delta = [&](double K) {
    return 2.0 * std::max(std::pow(C0, e) * std::pow(zeta_tail(K, ib.s_low), e),
                          std::pow(C1, e) * std::pow(zeta_tail(K, ib.s_high), e));
  };
  auto ok = [&](double K) { return delta(K) * ib.Lambda <= 0.5; };
  double K = 0.0;
  if (!ok(0.0)) {
    double lo = 0.0, hi = 1.0;
    while (!ok(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw ParameterError("gradient bound: no admissible truncation level K");
    }
    // integer resolution is lost past 2^53, stop at relative precision there
    while (hi - lo > std::max(1.0, 1e-9 * hi)) {
      const double mid = std::floor(0.5 * (lo + hi));
      (ok(mid) ? hi : lo) = mid;
    }
    K = hi;
  }
  ib.K = K;
  ib.delta = delta(K);
  const double C2 = std::max(std::pow(C0, e) * std::pow(QT, (p - q) / p), std::pow(C1, e) * std::pow(QT, (q - 1.0) / p));
  ib.C_K = 2.0 * (p - 1.0) / p * std::pow((K + 1.0) * C2, p / (p - 1.0)) * std::pow(2.0 / p, 1.0 / (p - 1.0)) +
           2.0 * (K + 1.0) * C2;
  ib.q_power_bound = 2.0 * (ib.C_K + ib.delta * q / p);
  return ib;
}

EstimateReport check_gradient_q_bound(const RunResult& run, double q, const ConstantsLedger& c) {
  const double beta = beta_constant(c, c.T);
  const double C0 = band_constant(c, c.T) / c.alpha;
  const double C1 = 2.0 * c.v_inf / c.alpha;
  const InterpolationBound ib = interpolation_bound(c.p, q, c.dim, beta, C0, C1, c.QT_measure);
  double acc = 0.0;
  for_each_point(run.solution, [&](const QuadPoint& pt) { acc += pt.weight * std::pow(std::abs(pt.du), q); }, kRule);
  EstimateReport rep;
  rep.name = "gradient_q[q=" + std::to_string(q).substr(0, 4) + "]";
  rep.lhs = std::pow(acc, 1.0 / q);
  rep.rhs = std::pow(ib.q_power_bound, 1.0 / q);
  rep.constants = {{"q", q},          {"r", ib.r},         {"eta", ib.eta},     {"C_gn", ib.C_gn},
                   {"K", ib.K},       {"delta_K", ib.delta}, {"C_K", ib.C_K},   {"Lambda", ib.Lambda},
                   {"beta", beta},    {"C0", C0},          {"C1", C1},          {"QT_measure", c.QT_measure},
                   {"d1_endpoint", 1.0}};
  return rep.settle();
}

EstimateReport check_nonlinearity_l1(const RunResult& run, const ConstantsLedger& c, int k_split) {
  if (k_split < 0) throw ParameterError("k_split must be nonnegative");
  double lhs = 0.0, gamma = 0.0;
  for_each_point(run.solution, [&](const QuadPoint& q) {
    lhs += q.weight * std::abs(g_eps(run, q));
    gamma += q.weight * std::abs(run.nl.gamma(q.x, q.t));
  }, kRule);
  const double C0 = band_constant(c, c.T);
  const double C1 = 2.0 * c.v_inf / c.alpha;
  const double hn = run.nl.h(k_split + 1.0);
  double holder = 0.0;
  BandIntegrals top;
  for (int j = 0; j <= k_split; ++j) {
    const BandIntegrals bi = band_integrals(run, j, c.p);
    holder += std::pow(bi.B_measure, (c.p - c.sigma) / c.p) * std::pow(C0 / c.alpha + C1 * bi.E_grad, c.sigma / c.p);
    if (j == k_split) top = bi;
  }
  const double G1 = hn * gamma + hn * holder;
  const double G2 = 0.5 * C0 + c.v_inf * top.E_grad;
  EstimateReport rep;
  rep.name = "nonlinearity_l1[n=" + std::to_string(k_split) + "]";
  rep.lhs = lhs;
  rep.rhs = G1 + G2;
  rep.constants = {{"G1_bound", G1}, {"G2_bound", G2}, {"h_n_plus_1", hn}, {"gamma_l1", gamma},
                   {"C0", C0},       {"C1", C1},       {"sigma", c.sigma}, {"E_grad_integral", top.E_grad}};
  return rep.settle();
}

TailValue check_tail(const RunResult& run, double k) {
  TailValue tv;
  tv.k = k;
  for_each_point(run.solution, [&](const QuadPoint& q) {
    const double g = g_eps(run, q);
    if (std::abs(q.u) >= k) tv.tail += q.weight * std::abs(g);
    tv.majorant += q.weight * g * T_k(k, q.u) / k;
  }, kRule);
  return tv;
}

EstimateReport check_tail_sequence(const RunResult& run, const std::vector<double>& ks) {
  EstimateReport rep;
  rep.name = "tail_sequence";
  double worst = -std::numeric_limits<double>::infinity();
  double prev = std::numeric_limits<double>::infinity();
  for (double k : ks) {
    const TailValue tv = check_tail(run, k);
    worst = std::max({worst, tv.tail - prev, tv.tail - tv.majorant});
    prev = tv.tail;
    rep.constants["tail_k" + std::to_string(int(k))] = tv.tail;
    rep.constants["majorant_k" + std::to_string(int(k))] = tv.majorant;
  }
  rep.lhs = std::max(worst, 0.0);
  rep.rhs = 1e-10;
  return rep.settle();
}

std::vector<EstimateReport> check_equi_integrability(const RunResult& run, const ConstantsLedger& c,
                                                     const std::vector<double>& fractions, int subsets,
                                                     std::uint64_t seed) {
  std::vector<double> cell_mass, cell_measure;
  for (const Slice& s : run.solution.slices)
    for (std::size_t k = 1; k < s.steps.size(); ++k) {
      const double dt = s.steps[k].time - s.steps[k - 1].time;
      const Field& f = s.steps[k];
      for (int e = 0; e < s.mesh.elements(); ++e) {
        double acc = 0.0;
        for (int g = 0; g < 3; ++g)
          acc += s.mesh.gauss_w(e, g) *
                 std::abs(regularize_g(run.nl, run.eps, s.mesh.gauss_x(e, g), f.time, f.at_gauss(e, g), f.slope(e)));
        cell_mass.push_back(dt * acc);
        cell_measure.push_back(dt * s.mesh.length(e));
      }
    }
  const std::size_t nc = cell_mass.size();
  double total_measure = std::accumulate(cell_measure.begin(), cell_measure.end(), 0.0);

  double gamma_pp = 0.0;
  for_each_point(run.solution,
                 [&](const QuadPoint& q) { gamma_pp += q.weight * std::pow(std::abs(run.nl.gamma(q.x, q.t)), c.p_prime); },
                 kRule);
  const double gamma_norm = std::pow(gamma_pp, 1.0 / c.p_prime);
  const double C0 = band_constant(c, c.T) / c.alpha, C1 = 2.0 * c.v_inf / c.alpha;
  const int kmax = 32;
  std::vector<double> tails(kmax + 1), S(kmax + 1);
  double running = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    running += C0 + C1 * band_integrals(run, k, c.p).E_grad;
    S[k] = running;
    tails[k] = k == 0 ? 0.0 : check_tail(run, k).tail;
  }

  std::vector<EstimateReport> out;
  std::vector<double> xs, ys;
  Rng rng(seed);
  std::vector<std::size_t> idx(nc);
  for (double frac : fractions) {
    const std::size_t m = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(frac * nc)), 1, nc);
    double worst = 0.0, worst_measure = 0.0;
    for (int trial = 0; trial < subsets; ++trial) {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      double mass = 0.0, meas = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t jdx = i + rng.index(nc - i);
        std::swap(idx[i], idx[jdx]);
        mass += cell_mass[idx[i]];
        meas += cell_measure[idx[i]];
      }
      worst = std::max(worst, mass);
      worst_measure = std::max(worst_measure, meas);
    }
    double best = std::numeric_limits<double>::infinity();
    int best_k = 1;
    for (int k = 1; k <= kmax; ++k) {
      const double hk = run.nl.h(double(k));
      const double maj = tails[k] + hk * gamma_norm * std::pow(worst_measure, 1.0 / c.p) +
                         hk * std::pow(S[k], c.sigma / c.p) * std::pow(worst_measure, (c.p - c.sigma) / c.p);
      if (maj < best) {
        best = maj;
        best_k = k;
      }
    }
    EstimateReport rep;
    rep.name = "equi_integrability[frac=" + std::to_string(frac) + "]";
    rep.lhs = worst;
    rep.rhs = best;
    rep.constants = {{"fraction", frac},        {"subset_measure", worst_measure}, {"QT_measure", total_measure},
                     {"split_level", double(best_k)}, {"gamma_lpprime", gamma_norm}, {"subsets", double(subsets)}};
    out.push_back(rep.settle());
    xs.push_back(frac);
    ys.push_back(worst);
  }
  EstimateReport expo;
  expo.name = "equi_integrability_exponent";
  const double required = std::min((c.p_prime - 1.0) / c.p_prime, (c.p - c.sigma) / c.p) - 0.1;
  const double ymax = ys.empty() ? 0.0 : *std::max_element(ys.begin(), ys.end());
  double observed = required;
  if (ymax > 0.0) {
    for (double& y : ys) y = std::max(y, ymax * 1e-300);
    observed = log_slope(xs, ys);
  }
  expo.lhs = required;
  expo.rhs = observed;
  expo.constants = {{"required_power", required}, {"observed_power", observed}};
  expo.pass = observed >= required;
  out.push_back(expo);
  return out;
}

CauchyMeasure gradient_cauchy_measure(const RunResult& a, const RunResult& b, double mu, double k, double delta) {
  if (!(mu > 0.0) || !(k > 0.0) || !(delta > 0.0)) throw ParameterError("cauchy measure: mu, k, delta must be positive");
  const PairedPoints pp = pair_points(a, b);
  CauchyMeasure cm;
  double grad_a = 0.0, grad_b = 0.0, diff_l1 = 0.0, grad_diff_l1 = 0.0, f_gap = 0.0, ga = 0.0, gb = 0.0, theta_int = 0.0;
  const DiffusionLaw& law = a.law;
  for (std::size_t i = 0; i < pp.a.size(); ++i) {
    const QuadPoint& qa = pp.a[i];
    const QuadPoint& qb = pp.b[i];
    const double w = qa.weight;
    const double dg = std::abs(qa.du - qb.du), du = std::abs(qa.u - qb.u);
    if (dg > mu) cm.A += w;
    if (std::abs(qa.du) >= k) cm.A1 += w;
    if (std::abs(qb.du) >= k) cm.A2 += w;
    if (du >= delta) cm.A3 += w;
    if (dg >= mu && std::abs(qa.du) <= k && std::abs(qb.du) <= k && du <= delta) cm.A4 += w;
    grad_a += w * std::abs(qa.du);
    grad_b += w * std::abs(qb.du);
    diff_l1 += w * du;
    grad_diff_l1 += w * dg;
    f_gap += w * std::abs(a.regularized.f_eps(qa.x, qa.t) - b.regularized.f_eps(qb.x, qb.t));
    ga += w * std::abs(g_eps(a, qa));
    gb += w * std::abs(g_eps(b, qb));
    if (du <= delta) {
      const double Theta = law.Theta_C * std::pow(1.0 + std::abs(qa.du) + std::abs(qb.du), law.varrho);
      theta_int += w * std::pow(Theta, 1.0 / (law.theta - 1.0));
    }
  }
  cm.maj1 = grad_a / k;
  cm.maj2 = grad_b / k;
  cm.maj3 = diff_l1 / delta;
  const double H = initial_gap(a, b) + f_gap + a.v.sup_div_norm * diff_l1 + a.v.sup_norm * grad_diff_l1 + ga + gb;
  cm.maj4 = std::pow(delta * H, 1.0 / law.theta) * std::pow(theta_int, (law.theta - 1.0) / law.theta) / mu;
  return cm;
}

EstimateReport check_flux_integrability(const RunResult& run, double s, const ConstantsLedger& c) {
  const double limit = 1.0 + 1.0 / ((c.p - 1.0) * (c.dim + 1.0));
  if (!(s >= 1.0) || !(s < limit)) throw ParameterError("flux integrability: s must satisfy 1 <= s < 1 + 1/((p-1)(d+1))");
  double lhs = 0.0, phi = 0.0;
  for_each_point(run.solution, [&](const QuadPoint& q) {
    lhs += q.weight * std::pow(std::abs(run.law.flux(q.x, q.t, q.du)), s);
    phi += q.weight * std::pow(std::abs(run.law.phi_growth(q.x, q.t)), s);
  }, kRule);
  const double beta = beta_constant(c, c.T);
  const double C0 = band_constant(c, c.T) / c.alpha, C1 = 2.0 * c.v_inf / c.alpha;
  const double q = s * (c.p - 1.0);
  double grad_bound;
  if (q >= 1.0) {
    grad_bound = interpolation_bound(c.p, q, c.dim, beta, C0, C1, c.QT_measure).q_power_bound;
  } else {
    const double b1 = interpolation_bound(c.p, 1.0, c.dim, beta, C0, C1, c.QT_measure).q_power_bound;
    grad_bound = std::pow(c.QT_measure, 1.0 - q) * std::pow(b1, q);
  }
  EstimateReport rep;
  rep.name = "flux_integrability[s=" + std::to_string(s).substr(0, 4) + "]";
  rep.lhs = lhs;
  rep.rhs = std::pow(2.0, s - 1.0) * (phi + std::pow(run.law.K, s) * grad_bound);
  rep.constants = {{"s", s}, {"s_limit", limit}, {"gradient_exponent", q}, {"gradient_power_bound", grad_bound},
                   {"phi_s_integral", phi}, {"K", run.law.K}};
  return rep.settle();
}

TimeContinuity time_continuity_modulus(const RunResult& a, const RunResult& b) {
  const PairedPoints pp = pair_points(a, b);
  TimeContinuity tc;
  double grad = 0.0, l1 = 0.0, g = 0.0, f = 0.0;
  for (std::size_t i = 0; i < pp.a.size(); ++i) {
    const QuadPoint& qa = pp.a[i];
    const QuadPoint& qb = pp.b[i];
    grad += qa.weight * std::abs(qa.du - qb.du);
    l1 += qa.weight * std::abs(qa.u - qb.u);
    g += qa.weight * std::abs(g_eps(a, qa) - g_eps(b, qb));
    f += qa.weight * std::abs(a.regularized.f_eps(qa.x, qa.t) - b.regularized.f_eps(qb.x, qb.t));
  }
  tc.terms = {{"u0_gap", initial_gap(a, b)},
              {"convection", a.v.sup_norm * grad},
              {"divergence", a.v.sup_div_norm * l1},
              {"reaction_gap", g},
              {"source_gap", f}};
  for (const auto& [k, v] : tc.terms) tc.m += v;
  for (std::size_t j = 0; j < a.solution.slices.size(); ++j)
    for (std::size_t k = 0; k < a.solution.slices[j].steps.size(); ++k) {
      Field diff = a.solution.slices[j].steps[k];
      diff.values -= b.solution.slices[j].steps[k].values;
      tc.sup_diff = std::max(tc.sup_diff, lp_norm(diff, 1.0));
    }
  tc.bound = std::sqrt(2.0) * std::sqrt(sup_slice_measure(a)) * std::sqrt(tc.m) + 2.0 * tc.m;
  return tc;
}

EstimateReport sobolev_constant_audit(const MovingDomain& domain, double q, double T, int trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("sobolev audit: trials must be >= 1");
  if (!(q >= 1.0)) throw ParameterError("sobolev audit: q must be >= 1");
  const auto [aT, bT] = jacobian_bounds(domain.flow, domain, T, 33);
  const double C0 = std::pow(domain.initial.length(), 1.0 - 1.0 / q);
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double t = rng.uniform(0.0, T);
    const Mesh mesh = build_mesh(domain_at(domain, t), domain_at(domain, t).length() / 64.0);
    Field u = zero_field(mesh, t);
    const int lo = 1 + static_cast<int>(rng.index(31));
    const int hi = lo + 2 + static_cast<int>(rng.index(62 - lo));
    for (int k = lo; k < hi; ++k) u.values[k] = rng.uniform(-1.0, 1.0);
    const double g = w1q_seminorm(u, q);
    if (g > 0.0) worst = std::max(worst, sup_norm(u) / g);
  }
  EstimateReport rep;
  rep.name = "sobolev_constant[q=" + std::to_string(q).substr(0, 4) + "]";
  rep.lhs = worst;
  rep.rhs = std::pow(aT, -1.0 / q) * C0;
  rep.constants = {{"a_T", aT}, {"b_T", bT}, {"C_Omega0", C0}, {"q", q}, {"q_star_infinite", 1.0}};
  return rep.settle();
}

EstimateReport aubin_lions_functional(const RunResult& run, int trials, std::uint64_t seed) {
  double left = -std::numeric_limits<double>::infinity(), right = std::numeric_limits<double>::infinity();
  for (const auto& I : run.grid.domains) {
    left = std::max(left, I.left);
    right = std::min(right, I.right);
  }
  if (!(right > left)) throw DegeneracyError("aubin_lions: slice domains have empty intersection");
  const double T = run.solution.horizon();
  auto bubble = [](double z, double a, double b) {
    if (z <= a || z >= b) return 0.0;
    const double s = (z - a) * (b - z) / (0.25 * (b - a) * (b - a));
    return s * s;
  };
  auto bubble_dt = [](double z, double a, double b) {
    if (z <= a || z >= b) return 0.0;
    const double c = 0.25 * (b - a) * (b - a);
    const double s = (z - a) * (b - z) / c;
    return 2.0 * s * (a + b - 2.0 * z) / c;
  };
  auto bubble_d2 = [](double z, double a, double b) {
    if (z <= a || z >= b) return 0.0;
    const double c = 0.25 * (b - a) * (b - a);
    const double s = (z - a) * (b - z) / c;
    const double ds = (a + b - 2.0 * z) / c;
    return 2.0 * ds * ds - 4.0 * s / c;
  };
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double w = (right - left) * rng.uniform(0.2, 1.0);
    const double xa = rng.uniform(left, right - w), xb = xa + w;
    const double tw = T * rng.uniform(0.2, 0.9);
    const double ta = rng.uniform(0.0, T - tw), tb = ta + tw;
    double integral = 0.0;
    for_each_point(run.solution,
                   [&](const QuadPoint& q) { integral += q.weight * q.u * bubble(q.x, xa, xb) * bubble_dt(q.t, ta, tb); });
    const double h2 = gauss_composite(
        [&](double x) {
          const double b0 = bubble(x, xa, xb), b1 = bubble_dt(x, xa, xb), b2 = bubble_d2(x, xa, xb);
          return b0 * b0 + b1 * b1 + b2 * b2;
        },
        xa, xb, 64);
    worst = std::max(worst, std::abs(integral) / std::sqrt(h2));
  }
  EstimateReport rep;
  rep.name = "aubin_lions";
  rep.lhs = worst;
  rep.rhs = std::numeric_limits<double>::max();
  rep.constants = {{"C_emp", worst}, {"trials", double(trials)}, {"m", 2.0}};
  rep.pass = std::isfinite(worst);
  return rep;
}

EstimateReport check_chebyshev(const RunResult& run, double r, int n) {
  if (n < 1) throw ParameterError("chebyshev: n must be >= 1");
  double E = 0.0, lr = 0.0;
  for_each_point(run.solution, [&](const QuadPoint& q) {
    if (above_band(n, q.u)) E += q.weight;
    lr += q.weight * std::pow(std::abs(q.u), r);
  }, kRule);
  EstimateReport rep;
  rep.name = "chebyshev[n=" + std::to_string(n) + "]";
  rep.lhs = E;
  rep.rhs = lr / std::pow(double(n), r);
  rep.constants = {{"r", r}, {"n", double(n)}};
  return rep.settle();
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

EstimateReport uniformity_report(const std::string& name, const std::vector<double>& eps,
                                 const std::vector<double>& values) {
  std::vector<double> inv;
  for (double e : eps) inv.push_back(1.0 / e);
  const double ymax = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  double slope = 0.0;
  if (ymax > 0.0) {
    std::vector<double> ys = values;
    for (double& y : ys) y = std::max(y, ymax * 1e-12);
    slope = log_slope(inv, ys);
  }
  EstimateReport rep;
  rep.name = "uniformity[" + name + "]";
  rep.lhs = slope;
  rep.rhs = 0.05;
  rep.constants = {{"max_value", ymax}, {"points", double(values.size())}};
  rep.pass = slope <= 0.05;
  return rep;
}

}  // namespace mf
