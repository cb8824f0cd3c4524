#pragma once

#include "nlpar/config.hpp"

#include <iosfwd>

namespace nlpar {

enum ExitCode : int { exit_pass = 0, exit_error = 1, exit_verification_failure = 2 };

/// Executes config.command, writing artifacts under config.output.directory:
/// field files, results.csv (or the command's table) and summary.json. A file
/// named FAILED is left behind when the run aborts with an error. Progress
/// lines go to `log`. Returns one of ExitCode.
int run(const RunConfig& config, std::ostream& log);

/// Name of the failure marker file.
inline constexpr const char* failure_marker = "FAILED";

}  // namespace nlpar
