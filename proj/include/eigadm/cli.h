#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eigadm::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kTestFailure = 1,
  kUsage = 2,
  kIo = 3,
  kNotSymmetric = 4,
  kNotDescending = 5,
  kNuBelowP = 6,
};

/// Runs the command line `args` (args[0] is the program name). Normal
/// output goes to `out`; diagnostics go to `err`, errors as a single line
/// starting with "error:".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace eigadm::cli
