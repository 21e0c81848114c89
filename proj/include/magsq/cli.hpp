#pragma once

#include <ostream>

namespace magsq {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,   // numerical failure (integration did not converge, I/O)
  kExitUsage = 2,     // bad arguments or schema violation
  kExitPhysical = 3,  // parameters violate a physical invariant
};

/// Entry point of `magsq`; summaries go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magsq
