#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lastmile {

// Process exit codes, one per error category.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitCap = 4,
  kExitInternal = 5,
};

// Entry point behind the `lastmile` executable. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lastmile
