#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moser::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kIo = 3,
};

/// Runs the command line `args` (without the program name). Data goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moser::cli
