#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qcont::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kViolation = 3 };

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcont::cli
