#include "movingflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "movingflow/errors.hpp"

namespace mf {

using nlohmann::json;

namespace {

// Object view that records which keys were read and rejects the rest.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& why) const { throw ConfigError(path_ + ": " + why); }
  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    throw ConfigError(path_ + "." + key + ": " + why);
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) fail(key, "missing required field");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<long>();
  }
  long integer(const std::string& key, long fallback) { return has(key) ? integer(key) : fallback; }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) { return has(key) ? string(key) : fallback; }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) fail(key, "expected a number or an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Node child(const std::string& key) {
    raw(key);
    return Node(j_.at(key), path_ + "." + key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double positive(Node& n, const std::string& key, double v) {
  if (!(v > 0.0)) n.fail(key, "must be positive");
  return v;
}

// |x - c|^{-1/2} scaled by a; closed-form antiderivative 2 sign(x-c) sqrt|x-c|.
double inverse_sqrt_abs_integral(double a, double c, double l, double r) {
  auto F = [c](double x) { return x >= c ? 2.0 * std::sqrt(x - c) : -2.0 * std::sqrt(c - x); };
  return std::abs(a) * (F(r) - F(l));
}

VelocityField parse_velocity(Node n, Interval initial, double T, double ode_step) {
  const std::string preset = n.string("preset");
  VelocityField v;
  if (preset == "zero") {
    v = VelocityField::zero();
  } else if (preset == "constant") {
    v = VelocityField::constant(n.number("c"));
  } else if (preset == "linear") {
    const double lambda = n.number("lambda");
    // Sup norm over the hold-all box swept by the endpoints.
    v = VelocityField::linear(lambda, initial.left, initial.right);
    const MovingDomain probe{initial, FlowMap{v, ode_step}};
    double lo = initial.left, hi = initial.right;
    for (int i = 0; i <= 64; ++i) {
      const Interval I = domain_at(probe, T * i / 64);
      lo = std::min(lo, I.left);
      hi = std::max(hi, I.right);
    }
    v = VelocityField::linear(lambda, lo, hi);
  } else if (preset == "compact_bump") {
    const double amplitude = n.number("amplitude"), center = n.number("center"), width = n.number("width");
    if (!(width > 0.0)) n.fail("width", "must be positive");
    v = VelocityField::compact_bump(amplitude, center, width);
  } else {
    n.fail("preset", "unknown velocity preset '" + preset + "'");
  }
  n.finish();
  return v;
}

DiffusionLaw parse_law(Node n, double domain_length) {
  const std::string preset = n.string("preset");
  if (preset != "p_laplace") n.fail("preset", "unknown law preset '" + preset + "'");
  const double p = n.number("p");
  if (!(p > 1.0)) n.fail("p", "must exceed 1");
  const double alpha = n.number("alpha", 1.0);
  if (!(alpha > 0.0)) n.fail("alpha", "must be positive");
  const double K = n.number("K", alpha);
  if (K < alpha) n.fail("K", "growth constant must be >= alpha for the scaled p-Laplacian");
  const double theta = n.number("theta", std::max(p, 2.0));
  const double varrho = n.number("varrho", 0.0);
  const double Theta_C = n.number("Theta_C", std::pow(2.0, std::max(p - 2.0, 0.0)) / alpha);
  const double eta = n.number("newton_eta", 1e-6 * domain_length);
  n.finish();
  DiffusionLaw law = DiffusionLaw::p_laplace(p, theta, varrho, Theta_C, eta);
  law.alpha = alpha;
  law.K = K;
  law.flux = [p, alpha](double, double, double xi) { return alpha * p_laplace_flux(p, xi); };
  try {
    law.validate();
  } catch (const ParameterError& e) {
    n.fail(e.what());
  }
  return law;
}

Nonlinearity parse_nonlinearity(Node n) {
  const std::string preset = n.string("preset");
  Nonlinearity nl;
  if (preset == "none") {
    nl = Nonlinearity::none();
  } else if (preset == "power") {
    const double C = n.number("C"), sigma = n.number("sigma"), gamma = n.number("gamma");
    const long k = n.integer("k");
    try {
      nl = Nonlinearity::power(C, static_cast<int>(k), sigma, gamma);
    } catch (const ParameterError& e) {
      n.fail(e.what());
    }
  } else {
    n.fail("preset", "unknown nonlinearity preset '" + preset + "'");
  }
  n.finish();
  return nl;
}

void parse_u0(Node n, ProblemData& data, Interval initial) {
  const std::string preset = n.string("preset");
  if (preset == "zero") {
    data.u0 = [](double) { return 0.0; };
    data.u0_abs_integral = [](double, double) { return 0.0; };
  } else if (preset == "constant") {
    const double c = n.number("value");
    data.u0 = [c](double) { return c; };
    data.u0_abs_integral = [c](double l, double r) { return std::abs(c) * (r - l); };
  } else if (preset == "sine") {
    const double a = n.number("amplitude", 1.0);
    const double l0 = initial.left, len = initial.length();
    data.u0 = [=](double x) { return a * std::sin(std::numbers::pi * (x - l0) / len); };
  } else if (preset == "inverse_sqrt") {
    const double a = n.number("amplitude", 1.0), c = n.number("center", initial.left);
    data.u0 = [=](double x) { return x == c ? std::numeric_limits<double>::infinity() : a / std::sqrt(std::abs(x - c)); };
    data.u0_abs_integral = [=](double l, double r) { return inverse_sqrt_abs_integral(a, c, l, r); };
  } else {
    n.fail("preset", "unknown u0 preset '" + preset + "'");
  }
  n.finish();
}

void parse_f(Node n, ProblemData& data) {
  const std::string preset = n.string("preset");
  if (preset == "zero") {
    data.f = [](double, double) { return 0.0; };
    data.f_abs_integral = [](double, double, double) { return 0.0; };
  } else if (preset == "constant") {
    const double c = n.number("value");
    data.f = [c](double, double) { return c; };
    data.f_abs_integral = [c](double l, double r, double) { return std::abs(c) * (r - l); };
  } else if (preset == "spike") {
    const double a = n.number("amplitude", 1.0), c = n.number("center");
    data.f = [=](double x, double) {
      return x == c ? std::numeric_limits<double>::infinity() : a / std::sqrt(std::abs(x - c));
    };
    data.f_abs_integral = [=](double l, double r, double) { return inverse_sqrt_abs_integral(a, c, l, r); };
  } else {
    n.fail("preset", "unknown f preset '" + preset + "'");
  }
  n.finish();
}

Convection parse_scheme(Node& n) {
  const std::string s = n.string("convection_scheme", "upwind");
  if (s == "upwind") return Convection::Upwind;
  if (s == "centered") return Convection::Centered;
  n.fail("convection_scheme", "expected 'upwind' or 'centered'");
}

Handoff parse_handoff(Node& n) {
  const std::string s = n.string("handoff", "characteristic");
  if (s == "characteristic") return Handoff::Characteristic;
  if (s == "restrict") return Handoff::Restrict;
  if (s == "literal") return Handoff::Literal;
  n.fail("handoff", "expected 'characteristic', 'restrict' or 'literal'");
}

std::vector<AuditRequest> parse_audits(const json& j) {
  if (!j.is_array()) throw ConfigError("$.audits: expected an array");
  static const std::map<std::string, std::set<std::string>> known{
      {"assumptions", {"samples"}},
      {"l1_bound", {}},
      {"band", {"n"}},
      {"gradient_q", {"q"}},
      {"nonlinearity_l1", {"n"}},
      {"tail", {"k"}},
      {"equi_integrability", {"fractions", "subsets"}},
      {"flux_integrability", {"s"}},
      {"chebyshev", {"r", "n"}},
      {"sobolev", {"q", "trials"}},
      {"aubin_lions", {"trials"}},
      {"mollifier", {"delta", "rho", "p"}},
      {"lmax", {}},
      {"mms_error", {}},
      {"cauchy_measure", {"mu", "k", "delta"}},
      {"time_continuity", {}},
      {"uniformity", {}}};
  std::vector<AuditRequest> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "$.audits[" + std::to_string(i) + "]";
    AuditRequest a;
    if (j[i].is_string()) {
      a.name = j[i].get<std::string>();
    } else if (j[i].is_object() && j[i].contains("name") && j[i]["name"].is_string()) {
      a.name = j[i]["name"].get<std::string>();
      a.params = j[i];
      a.params.erase("name");
    } else {
      throw ConfigError(path + ": expected a name or an object with a string 'name'");
    }
    const auto it = known.find(a.name);
    if (it == known.end()) throw ConfigError(path + ".name: unknown audit '" + a.name + "'");
    for (auto p = a.params.begin(); p != a.params.end(); ++p) {
      if (!it->second.count(p.key())) throw ConfigError(path + "." + p.key() + ": unknown key");
      const json& v = p.value();
      const bool numeric = v.is_number() || (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) {
                                                 return x.is_number();
                                               }));
      if (!numeric) throw ConfigError(path + "." + p.key() + ": expected a number or an array of numbers");
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

RunConfig parse_config(const json& j) {
  Node root(j, "$");
  const std::string schema = root.string("schema");
  if (schema != kSchema) root.fail("schema", "unsupported schema '" + schema + "', expected '" + kSchema + "'");
  RunConfig cfg;
  cfg.echo = j;

  Node disc = root.child("discretization");
  cfg.N = static_cast<int>(disc.integer("N"));
  if (cfg.N < 1) disc.fail("N", "must be >= 1");
  cfg.solver.dt = positive(disc, "dt", disc.number("dt"));
  cfg.solver.h_target = positive(disc, "h_target", disc.number("h_target"));
  cfg.solver.convection_scheme = parse_scheme(disc);
  cfg.solver.handoff = parse_handoff(disc);
  cfg.solver.newton_tol = positive(disc, "newton_tol", disc.number("newton_tol", 1e-10));
  cfg.solver.newton_max_iter = static_cast<int>(disc.integer("newton_max_iter", 50));
  if (cfg.solver.newton_max_iter < 1) disc.fail("newton_max_iter", "must be >= 1");
  const double ode_step = positive(disc, "ode_step", disc.number("ode_step", cfg.solver.dt / 10.0));
  disc.finish();

  Node prob = root.child("problem");
  const std::vector<double> dom = prob.numbers("domain");
  if (dom.size() != 2 || !(dom[1] > dom[0])) prob.fail("domain", "expected [left, right] with left < right");
  const Interval initial{dom[0], dom[1]};
  const double T = positive(prob, "T", prob.number("T"));
  cfg.data.T = T;
  cfg.velocity = parse_velocity(prob.child("velocity"), initial, T, ode_step);
  cfg.domain = MovingDomain{initial, FlowMap{cfg.velocity, ode_step}};
  cfg.law = parse_law(prob.child("law"), initial.length());
  cfg.nl = parse_nonlinearity(prob.child("nonlinearity"));

  Node data = prob.child("data");
  const std::string dpreset = data.string("preset", "custom");
  if (dpreset == "mms_drift") {
    if (cfg.law.p != 2.0 || cfg.law.alpha != 1.0) data.fail("preset", "mms_drift requires p = 2 and alpha = 1");
    const double c = data.number("c");
    const double l0 = initial.left, len = initial.length();
    const double k = std::numbers::pi / len;
    // u = sin(k(x - l0 - ct)) on a domain translated by c; f = k^2 u + g(u, u').
    cfg.exact = [=](double x, double t) { return std::sin(k * (x - l0 - c * t)); };
    const Nonlinearity nl = cfg.nl;
    cfg.data.u0 = [=](double x) { return std::sin(k * (x - l0)); };
    cfg.data.f = [=](double x, double t) {
      const double u = std::sin(k * (x - l0 - c * t)), du = k * std::cos(k * (x - l0 - c * t));
      return k * k * u + nl.g(x, t, u, du);
    };
  } else if (dpreset == "custom") {
    parse_u0(data.child("u0"), cfg.data, initial);
    parse_f(data.child("f"), cfg.data);
  } else {
    data.fail("preset", "unknown data preset '" + dpreset + "'");
  }
  data.finish();
  prob.finish();

  Node reg = root.child("regularization");
  cfg.eps = reg.numbers("eps");
  if (cfg.eps.empty()) reg.fail("eps", "must be non-empty");
  for (double e : cfg.eps)
    if (!(e > 0.0)) reg.fail("eps", "every eps must be positive");
  reg.finish();

  cfg.audits = root.has("audits") ? parse_audits(root.raw("audits")) : std::vector<AuditRequest>{};
  cfg.seed = static_cast<std::uint64_t>(root.integer("seed", 0));
  cfg.output_dir = root.string("output_dir", cfg.output_dir);
  root.finish();
  cfg.solver.eps = cfg.eps.front();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": malformed JSON: " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json builtin_l1_config() {
  return json{
      {"schema", kSchema},
      {"problem",
       {{"domain", {0.0, 1.0}},
        {"T", 0.25},
        {"velocity", {{"preset", "linear"}, {"lambda", 0.2}}},
        {"law", {{"preset", "p_laplace"}, {"p", 3.0}, {"theta", 3.0}, {"varrho", 0.0}, {"Theta_C", 4.0}}},
        {"nonlinearity", {{"preset", "power"}, {"C", 1.0}, {"k", 2}, {"sigma", 1.0}, {"gamma", 1.0}}},
        {"data",
         {{"u0", {{"preset", "inverse_sqrt"}, {"amplitude", 1.0}, {"center", 0.0}}},
          {"f", {{"preset", "spike"}, {"amplitude", 1.0}, {"center", 0.5}}}}}}},
      {"discretization",
       {{"N", 8},
        {"dt", 1.0 / 512.0},
        {"h_target", 1.0 / 64.0},
        {"convection_scheme", "upwind"},
        {"handoff", "characteristic"}}},
      {"regularization", {{"eps", {1e-1, 1e-2, 1e-3, 1e-4}}}},
      {"audits",
       {"l1_bound",
        {{"name", "band"}, {"n", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}},
        {{"name", "gradient_q"}, {"q", {1.0, 1.2}}},
        {{"name", "nonlinearity_l1"}, {"n", 2}},
        {{"name", "tail"}, {"k", {1, 2, 4, 8, 16}}},
        {{"name", "equi_integrability"}, {"fractions", {0.1, 0.01, 0.001}}, {"subsets", 100}},
        {{"name", "flux_integrability"}, {"s", {1.1}}},
        {{"name", "chebyshev"}, {"r", 2.0}, {"n", {1, 2, 4}}},
        {{"name", "sobolev"}, {"q", {1.0, 2.0}}, {"trials", 50}},
        {{"name", "aubin_lions"}, {"trials", 50}},
        {{"name", "mollifier"}, {"delta", 0.12}, {"rho", {0.1, 0.05, 0.025}}},
        "lmax",
        {{"name", "assumptions"}, {"samples", 10000}},
        {{"name", "cauchy_measure"}, {"mu", 0.1}},
        "time_continuity",
        "uniformity"}},
      {"seed", 20240611},
      {"output_dir", "movingflow_out"}};
}

json builtin_mms_config(double h_target, double dt, double T) {
  return json{{"schema", kSchema},
              {"problem",
               {{"domain", {0.0, 1.0}},
                {"T", T},
                {"velocity", {{"preset", "constant"}, {"c", 0.2}}},
                {"law", {{"preset", "p_laplace"}, {"p", 2.0}}},
                {"nonlinearity", {{"preset", "none"}}},
                {"data", {{"preset", "mms_drift"}, {"c", 0.2}}}}},
              {"discretization",
               {{"N", static_cast<long>(std::llround(T / dt))},
                {"dt", dt},
                {"h_target", h_target},
                {"convection_scheme", "centered"},
                {"handoff", "characteristic"}}},
              {"regularization", {{"eps", {1e-12}}}},
              {"audits", {"mms_error"}},
              {"seed", 1},
              {"output_dir", "movingflow_mms"}};
}

SliceGrid make_grid(const RunConfig& cfg) { return partition_time(cfg.data.T, cfg.N, cfg.domain); }

RunResult execute(const RunConfig& cfg, double eps) {
  return solve_moving(cfg.domain, cfg.law, cfg.nl, cfg.velocity, cfg.data, eps, make_grid(cfg), cfg.solver);
}

}  // namespace mf
