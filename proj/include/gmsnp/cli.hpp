#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gmsnp {

/// Exit codes: 0 yes or success, 1 no, 2 usage or data error, 3 budget,
/// size guard or unknown.
enum ExitCode { kExitYes = 0, kExitNo = 1, kExitError = 2, kExitUnknown = 3 };

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmsnp
