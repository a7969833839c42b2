#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>

#include "fracheat/cli/run_config.hpp"

namespace fracheat::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kRegimeError = 3, kNumericalError = 4 };

/// config echo + results + version, plus a "runtime" object (wall time, workers) unless
/// cfg.omit_runtime. Everything outside "runtime" is reproducible bit for bit.
using RunRecord = nlohmann::json;

RunRecord cmd_moment(const RunConfig& cfg);
RunRecord cmd_chaos(const RunConfig& cfg);
RunRecord cmd_check(const RunConfig& cfg);
RunRecord cmd_solve(const RunConfig& cfg);
/// Runs the validation suite, printing one line per check to `log`. The record's
/// "results.all_pass" tells whether every check passed.
RunRecord cmd_validate(const RunConfig& cfg, std::ostream& log);

RunRecord dispatch(const RunConfig& cfg, std::ostream& log);

/// Record with the "runtime" object removed.
RunRecord reproducible_part(const RunRecord& record);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracheat::cli
