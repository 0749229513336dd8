#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace colorcenter::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInput = 2,
  kExitNotConverged = 3,
};

/// Runs the colorcenter command line. `args` excludes the program name.
/// Output files are written only when the command succeeds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace colorcenter::cli
