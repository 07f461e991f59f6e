#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qjacobi {

/// Exit codes: 0 ok, 1 identity failed, 2 bad arguments, 3 table or algebra error.
enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitUsage = 2, kExitInput = 3 };

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace qjacobi
