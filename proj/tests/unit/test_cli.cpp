#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "movingflow/archive.hpp"
#include "movingflow/cli.hpp"
#include "movingflow/config.hpp"
#include "movingflow/errors.hpp"
#include "support.hpp"

using namespace mf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("movingflow_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

nlohmann::json light_zero_config() {
  auto j = mf::testing::zero_config();
  j["audits"] = {"l1_bound", {{"name", "band"}, {"n", {0, 1}}}, "lmax", "time_continuity"};
  return j;
}

}  // namespace

TEST(Config, RejectsUnknownKeys) {
  auto j = builtin_l1_config();
  j["discretization"]["dtt"] = 0.1;
  try {
    parse_config(j);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("dtt"), std::string::npos);
  }
  auto a = builtin_l1_config();
  a["audits"][1]["bogus"] = 1;
  EXPECT_THROW(parse_config(a), ConfigError);
  auto s = builtin_l1_config();
  s["schema"] = "movingflow/0";
  EXPECT_THROW(parse_config(s), ConfigError);
  auto h = builtin_l1_config();
  h["discretization"]["handoff"] = "sideways";
  EXPECT_THROW(parse_config(h), ConfigError);
}

TEST(Config, BuiltinsParse) {
  const RunConfig c = parse_config(builtin_l1_config());
  EXPECT_EQ(c.eps.size(), 4u);
  EXPECT_EQ(c.N, 8);
  const RunConfig m = parse_config(builtin_mms_config(1.0 / 16, 1.0 / 256));
  EXPECT_TRUE(static_cast<bool>(m.exact));
  EXPECT_EQ(m.solver.handoff, Handoff::Characteristic);
}

TEST(Archive, CsvAndBinaryRoundTrip) {
  nlohmann::json j = builtin_l1_config();
  j["problem"]["T"] = 0.03;
  j["discretization"]["N"] = 2;
  const RunResult r = mf::testing::run_of(j, 1e-2);
  const SpaceTimeField csv = parse_fields_csv(fields_csv(r.solution));
  const SpaceTimeField bin = parse_fields_bin(fields_bin(r.solution));
  for (const SpaceTimeField* back : {&csv, &bin}) {
    ASSERT_EQ(back->slices.size(), r.solution.slices.size());
    for (double q : {1.0, 2.0}) {
      const double a = spacetime_norm(r.solution, q, SpatialNorm::Lebesgue, q);
      EXPECT_NEAR(spacetime_norm(*back, q, SpatialNorm::Lebesgue, q), a, 1e-12 * (1.0 + a));
      const double g = spacetime_norm(r.solution, q, SpatialNorm::GradientLebesgue, q);
      EXPECT_NEAR(spacetime_norm(*back, q, SpatialNorm::GradientLebesgue, q), g, 1e-12 * (1.0 + g));
    }
  }
  auto bytes = fields_bin(r.solution);
  bytes[0] = 'X';
  EXPECT_ANY_THROW(parse_fields_bin(bytes));
}

TEST(Archive, ReportJsonRoundTrip) {
  EstimateReport rep{"band[n=2]", 0.25, 1.5, {{"C0", 3.0}}, true, {{"eps", "0.1"}}};
  const EstimateReport back = report_from_json(report_to_json(rep));
  EXPECT_EQ(back.name, rep.name);
  EXPECT_DOUBLE_EQ(back.lhs, rep.lhs);
  EXPECT_DOUBLE_EQ(back.rhs, rep.rhs);
  EXPECT_EQ(back.constants, rep.constants);
  EXPECT_EQ(back.context, rep.context);
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Cli, RunZeroConfigAndReport) {
  const fs::path out = scratch("run");
  const RunConfig cfg = parse_config(light_zero_config());
  EXPECT_EQ(cli::cmd_run(cfg, out, 2), cli::kOk);
  EXPECT_TRUE(fs::exists(out / "config.json"));
  EXPECT_TRUE(fs::exists(out / "fields.csv"));
  EXPECT_TRUE(fs::exists(out / "fields.bin"));
  EXPECT_TRUE(fs::exists(out / "ledger.json"));
  EXPECT_TRUE(fs::exists(out / "plots" / "field_snapshots.svg"));
  std::ostringstream os;
  EXPECT_EQ(cli::cmd_report(out, os), cli::kOk);
  EXPECT_NE(os.str().find("l1_bound"), std::string::npos);
  EXPECT_EQ(cli::cmd_plot(out, "bands", 1), cli::kOk);
  const std::string svg = read_text(out / "plots" / "bands_n1.svg");
  EXPECT_NE(svg.find("shaded cells: 0 "), std::string::npos);
  fs::remove_all(out);
}

TEST(Cli, ReportExitCodes) {
  const fs::path empty = scratch("empty");
  std::ostringstream os;
  EXPECT_EQ(cli::cmd_report(empty, os), cli::kOk);
  EXPECT_NE(os.str().find("no audits"), std::string::npos);

  fs::create_directories(empty / "reports");
  EstimateReport bad{"fake", 2.0, 1.0, {}, false, {}};
  write_text(empty / "reports" / "0000_run0_fake.json", dump_json(report_to_json(bad)));
  std::ostringstream os2;
  EXPECT_EQ(cli::cmd_report(empty, os2), cli::kAuditFailed);
  EXPECT_NE(os2.str().find("FAIL"), std::string::npos);
  fs::remove_all(empty);
}

TEST(Cli, MainEntryInputErrors) {
  const fs::path dir = scratch("bad");
  write_text(dir / "broken.json", "{ not json");
  std::string path = (dir / "broken.json").string();
  std::vector<std::string> args{"movingflow", "run", path};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  EXPECT_EQ(cli::main_entry(static_cast<int>(argv.size()), argv.data()), cli::kBadInput);

  std::string missing = (dir / "missing.json").string();
  std::vector<std::string> args2{"movingflow", "run", missing};
  std::vector<char*> argv2;
  for (auto& a : args2) argv2.push_back(a.data());
  EXPECT_EQ(cli::main_entry(static_cast<int>(argv2.size()), argv2.data()), cli::kBadInput);
  fs::remove_all(dir);
}

TEST(Cli, SingleValueSweepMatchesRun) {
  const fs::path a = scratch("sweep1"), b = scratch("run1");
  auto j = light_zero_config();
  j["regularization"]["eps"] = {0.1};
  const RunConfig cfg = parse_config(j);
  EXPECT_EQ(cli::cmd_sweep(cfg, "eps", {0.1}, a, 1), cli::kOk);
  EXPECT_EQ(cli::cmd_run(cfg, b, 1), cli::kOk);
  EXPECT_EQ(read_text(a / "fields.csv"), read_text(b / "fields.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}
