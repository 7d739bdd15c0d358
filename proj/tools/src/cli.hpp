#pragma once

#include <iosfwd>

namespace dgsmlab::cli {

// Exit codes of the dgsm-lab binary.
enum ExitCode : int {
  kOk = 0,
  kBenchFailed = 1,
  kConfigError = 2,
  kEvaluationError = 3,
  kCapacityError = 4,
};

// Runs the command line; every path writes exactly one "status:" line to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dgsmlab::cli
