#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hazardfield::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,     // bad flags, config file or input file
  kPartialFailure = 2,  // some lattice nodes could not be evaluated
  kValidationFailure = 3,
};

/// Runs one command line (without the program name), e.g.
/// {"eval", "--expr", "x", "--domain", "0:1"}. Reports go to `out`,
/// diagnostics to `err`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hazardfield::cli
