#pragma once

#include <ostream>

namespace triml {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitInvalid = 2,
    kExitNotConverged = 3,
    kExitIo = 4,
};

/// The `triml` command line: eval, eval-univariate, solve, verify, table.
/// CSV and reports go to `out` unless --out names a file; diagnostics go
/// to `err`.  Returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace triml
