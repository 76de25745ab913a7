#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ctdnet::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDivergence = 3,
  kValidationFailure = 4,
  kUnknownKey = 5,
  kOutputError = 6,
};

/// Parse and execute one command line (without the program name).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctdnet::cli
