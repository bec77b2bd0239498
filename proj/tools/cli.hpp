#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace codingsim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitConfig = 3,
};

/// Runs one command line (without the program name). Progress goes to `out`
/// as JSON lines, human-readable messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codingsim::cli
