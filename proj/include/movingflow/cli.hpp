#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "movingflow/config.hpp"
#include "movingflow/report.hpp"

namespace mf::cli {

enum ExitCode : int { kOk = 0, kAuditFailed = 1, kBadInput = 2, kNonconvergence = 3, kRuntimeError = 4 };

// Audits that need a single run.
std::vector<EstimateReport> run_audits(const RunConfig& cfg, const RunResult& run, std::size_t run_index);
// Audits over consecutive members of an eps family sharing one grid.
std::vector<EstimateReport> cross_audits(const RunConfig& cfg, const std::vector<RunResult>& runs,
                                         const std::vector<std::vector<EstimateReport>>& per_run);

int cmd_run(const RunConfig& cfg, const std::filesystem::path& out, int jobs);
int cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::vector<double>& values,
              const std::filesystem::path& out, int jobs);
int cmd_report(const std::filesystem::path& dir, std::ostream& os);
int cmd_plot(const std::filesystem::path& dir, const std::string& kind, int band);

int main_entry(int argc, char** argv);

}  // namespace mf::cli
