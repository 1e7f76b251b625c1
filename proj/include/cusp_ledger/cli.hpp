#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cusp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailure = 1,
    kUsageError = 2,
    kInconsistency = 3,
};

// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cusp::cli
