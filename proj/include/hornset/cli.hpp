#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hornset {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitTrue = 0,       // success, or the decided property holds
    kExitFalse = 1,      // the decided property does not hold / empty result
    kExitDiagnostics = 2,
    kExitExhausted = 3,  // a search or enumeration cap was reached
};

/// Runs the tool on `args` (without the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hornset
