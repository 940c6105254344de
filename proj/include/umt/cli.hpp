#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace umt {

// Process exit codes of the `umt` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitRejected = 2,
  kExitRuntime = 3,
  kExitAssumption = 4,
  kExitVerify = 5,
};

// Runs the command line `args` (without the program name). Reports go to
// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace umt
