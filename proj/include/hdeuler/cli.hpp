#pragma once

#include <ostream>

namespace hdeuler {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2 };

/// Entry point of `hdeuler <subcommand> [flags]`:
///   verify-kernel    --d <int> [--out <json>]
///   verify-estimates --d <int> [--sweep <int>] [--out <json>]
///   simulate         --config <path> [--workers <int>]
///   envelopes        --series <csv> [--out <csv>] [--d <int>] [--constants calibrated|fitted]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hdeuler
