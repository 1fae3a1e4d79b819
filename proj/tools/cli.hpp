#pragma once

// Command-line front end: validate, optimize, test, features, block-removal, synth.

#include <iosfwd>
#include <string>
#include <vector>

namespace stylo::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kConfigError = 2,
  kRuntimeError = 3,
};

// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stylo::cli
