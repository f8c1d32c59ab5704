#include "movingflow/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include "movingflow/archive.hpp"
#include "movingflow/errors.hpp"
#include "movingflow/estimates.hpp"
#include "movingflow/mollify.hpp"
#include "movingflow/svg.hpp"

namespace mf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<double> param_list(const AuditRequest& a, const std::string& key, std::vector<double> fallback) {
  if (!a.params.contains(key)) return fallback;
  const json& v = a.params.at(key);
  if (v.is_number()) return {v.get<double>()};
  return v.get<std::vector<double>>();
}

double param(const AuditRequest& a, const std::string& key, double fallback) {
  if (!a.params.contains(key)) return fallback;
  const json& v = a.params.at(key);
  if (!v.is_number()) throw ConfigError("audit " + a.name + "." + key + ": expected a single number");
  return v.get<double>();
}

const AuditRequest* find_audit(const RunConfig& cfg, const std::string& name) {
  for (const auto& a : cfg.audits)
    if (a.name == name) return &a;
  return nullptr;
}

Interval hold_all(const RunConfig& cfg) {
  Interval box = cfg.domain.initial;
  for (int i = 0; i <= 64; ++i) {
    const Interval I = domain_at(cfg.domain, cfg.data.T * i / 64);
    box.left = std::min(box.left, I.left);
    box.right = std::max(box.right, I.right);
  }
  return box;
}

std::string eps_tag(double eps) { return format_double(eps); }

template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Point {
  RunConfig cfg;
  double eps;
};

struct Family {
  std::vector<std::optional<RunResult>> runs;
  std::vector<std::vector<EstimateReport>> reports;
  std::vector<std::string> failures;  // nonconvergence messages
  double wall_time = 0.0;
};

Family solve_family(const std::vector<Point>& points, int jobs) {
  Family fam;
  fam.runs.resize(points.size());
  fam.reports.resize(points.size());
  std::vector<std::string> failures(points.size());
  const auto start = std::chrono::steady_clock::now();
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    try {
      RunResult run = execute(points[i].cfg, points[i].eps);
      fam.reports[i] = run_audits(points[i].cfg, run, i);
      fam.runs[i] = std::move(run);
    } catch (const NonconvergenceError& e) {
      failures[i] = "run " + std::to_string(i) + " (eps " + eps_tag(points[i].eps) + ", slice " +
                    std::to_string(e.slice) + ", step " + std::to_string(e.step) + "): " + e.what();
    }
  });
  for (auto& f : failures)
    if (!f.empty()) fam.failures.push_back(f);
  fam.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return fam;
}

std::string file_stem(const std::string& name) {
  return std::regex_replace(name, std::regex("[^A-Za-z0-9_.-]+"), "_");
}

void reset_archive(const fs::path& out) {
  fs::create_directories(out);
  for (const char* sub : {"reports", "runs", "plots"}) fs::remove_all(out / sub);
  for (const char* file : {"ledger.json", "trend.csv", "fields.csv", "fields.bin", "meta.json"}) fs::remove(out / file);
}

void write_fields(const fs::path& dir, const SpaceTimeField& field) {
  write_text(dir / "fields.csv", fields_csv(field));
  const auto bytes = fields_bin(field);
  write_text(dir / "fields.bin", std::string(bytes.begin(), bytes.end()));
}

fs::path run_dir(const fs::path& out, std::size_t i) { return i == 0 ? out : out / "runs" / std::to_string(i); }

int write_archive(const fs::path& out, const json& echo, const std::vector<Point>& points, const Family& fam,
                  const std::vector<EstimateReport>& cross, const json& extra_meta) {
  write_text(out / "config.json", dump_json(echo));
  for (std::size_t i = 0; i < fam.runs.size(); ++i) {
    if (!fam.runs[i]) continue;
    const fs::path dir = run_dir(out, i);
    if (i > 0) write_text(dir / "config.json", dump_json(points[i].cfg.echo));
    write_fields(dir, fam.runs[i]->solution);
  }
  json ledger = json::array();
  std::size_t index = 0;
  bool all_pass = true;
  auto emit = [&](const EstimateReport& rep, const std::string& prefix) {
    std::ostringstream name;
    name << std::setw(4) << std::setfill('0') << index++ << "_" << prefix << file_stem(rep.name) << ".json";
    const json j = report_to_json(rep);
    write_text(out / "reports" / name.str(), dump_json(j));
    ledger.push_back(j);
    all_pass = all_pass && rep.pass;
  };
  for (std::size_t i = 0; i < fam.reports.size(); ++i)
    for (const auto& rep : fam.reports[i]) emit(rep, "run" + std::to_string(i) + "_");
  for (const auto& rep : cross) emit(rep, "cross_");
  write_text(out / "ledger.json", dump_json(ledger));

  json meta = extra_meta;
  meta["version"] = kVersion;
  meta["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                  std::to_string(EIGEN_MINOR_VERSION);
  meta["seed"] = points.empty() ? 0 : points.front().cfg.seed;
  meta["wall_time_total"] = fam.wall_time;
  json walls = json::array();
  for (const auto& r : fam.runs) walls.push_back(r ? r->wall_time : -1.0);
  meta["wall_time_runs"] = walls;
  meta["nonconvergence"] = fam.failures;
  meta["layout"] = "run 0 at top level, run i > 0 under runs/<i>/";
  write_text(out / "meta.json", dump_json(meta));

  if (!fam.runs.empty() && fam.runs.front())
    write_text(out / "plots" / "field_snapshots.svg", svg_field_snapshots(fam.runs.front()->solution));

  if (!fam.failures.empty()) {
    for (const auto& f : fam.failures) std::cerr << "nonconvergence: " << f << "\n";
    return kNonconvergence;
  }
  return all_pass ? kOk : kAuditFailed;
}

json with_seed(const RunConfig& cfg) {
  json echo = cfg.echo;
  echo["seed"] = cfg.seed;
  return echo;
}

RunConfig reparse(const json& j, const RunConfig& base) {
  RunConfig c = parse_config(j);
  c.seed = base.seed;
  c.output_dir = base.output_dir;
  c.echo["seed"] = base.seed;
  return c;
}

double final_gap(const RunResult& a, const RunResult& b) {
  const Field& fa = a.solution.slices.back().steps.back();
  const Field& fb = b.solution.slices.back().steps.back();
  const Interval ia = fa.mesh.interval(), ib = fb.mesh.interval();
  const double lo = std::max(ia.left, ib.left), hi = std::min(ia.right, ib.right);
  double acc = 0.0;
  const int cells = 512;
  for (int c = 0; c < cells; ++c) {
    const double l = lo + (hi - lo) * c / cells, r = lo + (hi - lo) * (c + 1) / cells;
    for (int g = 0; g < 3; ++g) {
      const double x = 0.5 * (l + r) + 0.5 * (r - l) * gauss3::nodes[g];
      acc += 0.5 * (r - l) * gauss3::weights[g] * std::abs(fa.eval(x) - fb.eval(x));
    }
  }
  return acc;
}

}  // namespace

std::vector<EstimateReport> run_audits(const RunConfig& cfg, const RunResult& run, std::size_t run_index) {
  std::vector<EstimateReport> out;
  const ConstantsLedger c = make_ledger(run);
  const std::uint64_t seed = cfg.seed + 7919ULL * run_index;
  auto add = [&](EstimateReport rep) {
    rep.context["eps"] = eps_tag(run.eps);
    rep.context["run"] = std::to_string(run_index);
    rep.context["level_sets"] = "quadrature-point classification, backward Euler time weights";
    out.push_back(std::move(rep));
  };
  for (const AuditRequest& a : cfg.audits) {
    if (a.name == "assumptions") {
      const Interval box = hold_all(cfg);
      const int samples = static_cast<int>(param(a, "samples", 10000));
      const AssumptionReport ar = check_assumptions(cfg.law, samples, seed, box, cfg.data.T);
      const NonlinearityReport nr = check_nonlinearity(cfg.nl, cfg.law.p, samples, seed + 1, box, cfg.data.T);
      EstimateReport rep;
      rep.name = "assumptions";
      rep.lhs = -std::min({ar.growth_margin, ar.coercivity_margin, ar.monotonicity_margin, nr.sign_margin,
                           nr.growth_margin});
      rep.rhs = 1e-10;
      rep.constants = {{"growth_margin", ar.growth_margin},       {"coercivity_margin", ar.coercivity_margin},
                       {"monotonicity_margin", ar.monotonicity_margin}, {"g_sign_margin", nr.sign_margin},
                       {"g_growth_margin", nr.growth_margin},     {"samples", double(samples)}};
      rep.pass = ar.pass && nr.pass;
      if (!ar.structural_note.empty()) rep.context["structural"] = ar.structural_note;
      add(rep);
    } else if (a.name == "l1_bound") {
      add(check_l1_bound(run, c));
    } else if (a.name == "band") {
      for (double n : param_list(a, "n", {0, 1, 2})) add(check_band_inequality(run, static_cast<int>(n), c));
    } else if (a.name == "gradient_q") {
      for (double q : param_list(a, "q", {1.0})) {
        EstimateReport rep = check_gradient_q_bound(run, q, c);
        rep.context["embedding"] = "d = 1: L-infinity endpoint (q* = infinity) via L1 - W1q interpolation";
        add(rep);
      }
    } else if (a.name == "nonlinearity_l1") {
      add(check_nonlinearity_l1(run, c, static_cast<int>(param(a, "n", 2))));
    } else if (a.name == "tail") {
      add(check_tail_sequence(run, param_list(a, "k", {1, 2, 4, 8, 16})));
    } else if (a.name == "equi_integrability") {
      for (auto& rep : check_equi_integrability(run, c, param_list(a, "fractions", {0.1, 0.01, 0.001}),
                                                static_cast<int>(param(a, "subsets", 100)), seed + 2))
        add(rep);
    } else if (a.name == "flux_integrability") {
      for (double s : param_list(a, "s", {1.0})) add(check_flux_integrability(run, s, c));
    } else if (a.name == "chebyshev") {
      const double r = param(a, "r", 2.0);
      for (double n : param_list(a, "n", {1, 2, 4})) add(check_chebyshev(run, r, static_cast<int>(n)));
    } else if (a.name == "sobolev") {
      for (double q : param_list(a, "q", {1.0, 2.0}))
        add(sobolev_constant_audit(cfg.domain, q, cfg.data.T, static_cast<int>(param(a, "trials", 50)), seed + 3));
    } else if (a.name == "aubin_lions") {
      // Same test functions for every run so the constants are comparable across eps.
      add(aubin_lions_functional(run, static_cast<int>(param(a, "trials", 50)), cfg.seed + 4));
    } else if (a.name == "mollifier") {
      add(mollify_convergence_audit(run.solution, param(a, "p", run.law.p), param(a, "delta", 0.12),
                                    param_list(a, "rho", {0.1, 0.05, 0.025})));
    } else if (a.name == "lmax") {
      add(lmax_bound_check(run));
    } else if (a.name == "mms_error") {
      EstimateReport rep;
      rep.name = "mms_error";
      if (!cfg.exact) throw ConfigError("audit mms_error: data preset has no exact solution");
      rep.lhs = spacetime_error(run.solution, cfg.exact, 2.0);
      rep.rhs = std::numeric_limits<double>::max();
      rep.constants = {{"h_target", cfg.solver.h_target}, {"dt", cfg.solver.dt}, {"N", double(cfg.N)}};
      rep.pass = std::isfinite(rep.lhs);
      add(rep);
    }
  }
  return out;
}

std::vector<EstimateReport> cross_audits(const RunConfig& cfg, const std::vector<RunResult>& runs,
                                         const std::vector<std::vector<EstimateReport>>& per_run) {
  std::vector<EstimateReport> out;
  if (runs.size() < 2) return out;
  auto pair_tag = [&](std::size_t i) { return "[" + eps_tag(runs[i].eps) + "," + eps_tag(runs[i + 1].eps) + "]"; };
  if (const AuditRequest* a = find_audit(cfg, "cauchy_measure")) {
    const double mu = param(*a, "mu", 0.1), k = param(*a, "k", 100.0), delta = param(*a, "delta", 0.01);
    std::vector<double> measures;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
      const CauchyMeasure cm = gradient_cauchy_measure(runs[i], runs[i + 1], mu, k, delta);
      measures.push_back(cm.A);
      EstimateReport rep;
      rep.name = "cauchy_A4" + pair_tag(i);
      rep.lhs = cm.A4;
      rep.rhs = cm.maj4;
      rep.constants = {{"A", cm.A},       {"A1", cm.A1},       {"A2", cm.A2},       {"A3", cm.A3},
                       {"A4", cm.A4},     {"maj1", cm.maj1},   {"maj2", cm.maj2},   {"maj3", cm.maj3},
                       {"maj4", cm.maj4}, {"mu", mu},          {"k", k},            {"delta", delta},
                       {"theta", runs[i].law.theta}};
      out.push_back(rep.settle());
    }
    EstimateReport mono;
    mono.name = "cauchy_monotone";
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < measures.size(); ++i) worst = std::max(worst, measures[i + 1] - measures[i]);
    mono.lhs = worst;
    mono.rhs = 0.0;
    for (std::size_t i = 0; i < measures.size(); ++i) mono.constants["measure_pair" + std::to_string(i)] = measures[i];
    out.push_back(mono.settle());
  }
  if (find_audit(cfg, "time_continuity")) {
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
      const TimeContinuity tc = time_continuity_modulus(runs[i], runs[i + 1]);
      EstimateReport rep;
      rep.name = "time_continuity" + pair_tag(i);
      rep.lhs = tc.sup_diff;
      rep.rhs = tc.bound;
      rep.constants = tc.terms;
      rep.constants["m"] = tc.m;
      out.push_back(rep.settle());
    }
  }
  if (find_audit(cfg, "uniformity")) {
    std::vector<double> eps;
    for (const auto& r : runs) eps.push_back(r.eps);
    std::map<std::string, std::vector<double>> series;
    for (const auto& reps : per_run)
      for (const auto& rep : reps)
        if (rep.name == "l1_bound" || rep.name == "aubin_lions" || rep.name.rfind("gradient_q", 0) == 0 ||
            rep.name.rfind("nonlinearity_l1", 0) == 0 || rep.name.rfind("flux_integrability", 0) == 0)
          series[rep.name].push_back(rep.lhs);
    std::map<std::string, std::pair<double, double>> shared;  // max lhs, min rhs
    for (const auto& reps : per_run)
      for (const auto& rep : reps) {
        if (!series.count(rep.name)) continue;
        auto [it, fresh] = shared.try_emplace(rep.name, rep.lhs, rep.rhs);
        if (!fresh) it->second = {std::max(it->second.first, rep.lhs), std::min(it->second.second, rep.rhs)};
      }
    for (const auto& [name, values] : series) {
      if (values.size() != eps.size()) continue;
      if (name.rfind("nonlinearity_l1", 0) != 0) out.push_back(uniformity_report(name, eps, values));
      EstimateReport rep;
      if (name == "aubin_lions") continue;
      rep.name = "shared_bound[" + name + "]";
      rep.lhs = shared[name].first;
      rep.rhs = shared[name].second;
      rep.constants = {{"runs", double(values.size())}};
      out.push_back(rep.settle());
    }
  }
  return out;
}

namespace {

int run_points(const RunConfig& base, const std::vector<Point>& points, const fs::path& out, int jobs,
               const std::string& axis, const std::vector<double>& values) {
  reset_archive(out);
  Family fam = solve_family(points, jobs);
  std::vector<EstimateReport> cross;
  const bool complete = std::all_of(fam.runs.begin(), fam.runs.end(), [](const auto& r) { return r.has_value(); });
  if (complete && (axis.empty() || axis == "eps")) {
    std::vector<RunResult> runs;
    for (auto& r : fam.runs) runs.push_back(*r);
    cross = cross_audits(base, runs, fam.reports);
  }
  json meta = json::object();
  if (!axis.empty()) {
    meta["axis"] = axis;
    meta["values"] = values;
    std::string csv = "axis,value,quantity,metric\n";
    std::map<std::string, TrendSeries> series;
    auto row = [&](double v, const std::string& q, double m) {
      csv += axis + "," + format_double(v) + "," + q + "," + format_double(m) + "\n";
      series[q].label = q;
      series[q].x.push_back(v);
      series[q].y.push_back(m);
    };
    for (std::size_t i = 0; i < fam.runs.size(); ++i) {
      if (!fam.runs[i]) continue;
      const RunResult& r = *fam.runs[i];
      row(values[i], "sup_l1", spacetime_norm(r.solution, kSupTime, SpatialNorm::Lebesgue, 1.0));
      row(values[i], "gradient_l1", spacetime_norm(r.solution, 1.0, SpatialNorm::GradientLebesgue, 1.0));
      if (points[i].cfg.exact) row(values[i], "error_l2", spacetime_error(r.solution, points[i].cfg.exact, 2.0));
      if (axis != "eps" && i > 0 && fam.runs[i - 1]) row(values[i], "successive_difference", final_gap(*fam.runs[i - 1], r));
    }
    write_text(out / "trend.csv", csv);
    std::vector<TrendSeries> list;
    for (auto& [k, s] : series) list.push_back(s);
    const int code = write_archive(out, with_seed(base), points, fam, cross, meta);
    write_text(out / "plots" / "trend.svg", svg_trend(list, axis, "metric"));
    return code;
  }
  return write_archive(out, with_seed(base), points, fam, cross, meta);
}

}  // namespace

int cmd_run(const RunConfig& cfg, const fs::path& out, int jobs) {
  std::vector<Point> points;
  for (double e : cfg.eps) points.push_back({cfg, e});
  return run_points(cfg, points, out, jobs, "", {});
}

int cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::vector<double>& values, const fs::path& out,
              int jobs) {
  if (values.empty()) throw ConfigError("sweep: --values must be non-empty");
  std::vector<Point> points;
  for (double v : values) {
    json j = with_seed(cfg);
    if (axis == "eps") {
      if (!(v > 0.0)) throw ConfigError("sweep: eps values must be positive");
      j["regularization"]["eps"] = json::array({v});
    } else if (axis == "delta") {
      if (v < 1.0 || v != std::floor(v)) throw ConfigError("sweep: delta values are slice counts N >= 1");
      j["discretization"]["N"] = static_cast<long>(v);
    } else if (axis == "h") {
      j["discretization"]["h_target"] = v;
    } else if (axis == "dt") {
      j["discretization"]["dt"] = v;
    } else {
      throw ConfigError("sweep: unknown axis '" + axis + "' (expected eps, delta, h or dt)");
    }
    RunConfig pc = reparse(j, cfg);
    const double eps = axis == "eps" ? v : cfg.eps.front();
    points.push_back({std::move(pc), eps});
  }
  RunConfig base = cfg;
  if (axis == "eps") base.eps = values;
  return run_points(base, points, out, jobs, axis, values);
}

int cmd_report(const fs::path& dir, std::ostream& os) {
  std::vector<fs::path> files;
  if (fs::is_directory(dir / "reports"))
    for (const auto& e : fs::directory_iterator(dir / "reports"))
      if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    os << "no audits in " << dir.string() << "\n";
    return kOk;
  }
  bool all = true;
  os << std::left << std::setw(44) << "audit" << std::right << std::setw(16) << "lhs" << std::setw(16) << "rhs"
     << std::setw(16) << "margin" << "  pass\n";
  for (const auto& f : files) {
    const EstimateReport rep = report_from_json(json::parse(read_text(f)));
    all = all && rep.pass;
    std::string label = rep.name;
    if (rep.context.count("eps")) label += " eps=" + rep.context.at("eps");
    os << std::left << std::setw(44) << label << std::right << std::setprecision(6) << std::setw(16) << rep.lhs
       << std::setw(16) << rep.rhs << std::setw(16) << rep.rhs - rep.lhs << "  " << (rep.pass ? "yes" : "NO  <<< FAIL")
       << "\n";
  }
  return all ? kOk : kAuditFailed;
}

int cmd_plot(const fs::path& dir, const std::string& kind, int band) {
  if (kind == "trend") {
    std::map<std::string, TrendSeries> series;
    std::istringstream in(read_text(dir / "trend.csv"));
    std::string line, axis = "value";
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> cols;
      std::stringstream ls(line);
      for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
      if (cols.size() != 4) throw ConfigError("trend.csv: expected 4 columns");
      axis = cols[0];
      auto& s = series[cols[2]];
      s.label = cols[2];
      s.x.push_back(std::stod(cols[1]));
      s.y.push_back(std::stod(cols[3]));
    }
    std::vector<TrendSeries> list;
    for (auto& [k, s] : series) list.push_back(s);
    write_text(dir / "plots" / "trend.svg", svg_trend(list, axis, "metric"));
    return kOk;
  }
  const SpaceTimeField field = parse_fields_csv(read_text(dir / "fields.csv"));
  if (kind == "field_snapshots") {
    write_text(dir / "plots" / "field_snapshots.svg", svg_field_snapshots(field));
  } else if (kind == "bands") {
    if (band < 0) throw ConfigError("plot: --n must be >= 0");
    write_text(dir / "plots" / ("bands_n" + std::to_string(band) + ".svg"), svg_bands(field, band));
  } else {
    throw ConfigError("plot: unknown kind '" + kind + "' (expected field_snapshots, trend or bands)");
  }
  return kOk;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"movingflow: quasilinear parabolic solver on moving 1-D domains with a-priori estimate audits"};
  app.require_subcommand(1);
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::optional<std::uint64_t> seed;
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "override the config seed");

  std::string config_path, dir, axis, kind = "field_snapshots";
  std::vector<double> values;
  int band = 1;
  auto* run = app.add_subcommand("run", "solve every eps of a config and audit");
  run->add_option("config", config_path)->required();
  auto* sweep = app.add_subcommand("sweep", "solve along one parameter axis");
  sweep->add_option("config", config_path)->required();
  sweep->add_option("--axis", axis)->required()->check(CLI::IsMember({"eps", "delta", "h", "dt"}));
  sweep->add_option("--values", values)->required()->delimiter(',');
  auto* report = app.add_subcommand("report", "print the ledger of an archive");
  report->add_option("dir", dir)->required();
  auto* plot = app.add_subcommand("plot", "render SVG plots of an archive");
  plot->add_option("dir", dir)->required();
  plot->add_option("--kind", kind)->check(CLI::IsMember({"field_snapshots", "trend", "bands"}));
  plot->add_option("--n", band, "band index for --kind bands");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*run || *sweep) {
      RunConfig cfg = load_config(config_path);
      if (seed) cfg.seed = *seed;
      fs::path out = cfg.output_dir;
      if (const char* env = std::getenv("MOVINGFLOW_OUT"); env && *env) out = env;
      const int code = *run ? cmd_run(cfg, out, jobs) : cmd_sweep(cfg, axis, values, out, jobs);
      std::cout << "archive: " << out.string() << " (exit " << code << ")\n";
      return code;
    }
    if (*report) return cmd_report(dir, std::cout);
    return cmd_plot(dir, kind, band);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kBadInput;
  } catch (const json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return kBadInput;
  } catch (const NonconvergenceError& e) {
    std::cerr << "nonconvergence: " << e.what() << "\n";
    return kNonconvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace mf::cli
