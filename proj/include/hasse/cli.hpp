#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hasse::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kHypothesisFailure = 2,
    kIntegralityViolation = 3,
};

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hasse::cli
