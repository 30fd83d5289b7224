#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fbm::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kInputError = 2,
  kDegenerate = 3,
};

/// Runs the command line (args excludes the program name). CSV goes to
/// --out when given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fbm::cli
