#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fracmech::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,        // bad flags, or parameters outside a formula's domain
    kNumeric = 3,      // integration failure, or a --check-tol comparison failed
    kUnsuitable = 4,   // the requested physics cannot produce the measurement
};

/// Runs one subcommand; `args` excludes the program name. Data goes to `out`
/// unless --out names a file. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracmech::cli
