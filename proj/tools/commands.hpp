#pragma once

#include <span>
#include <string>
#include <vector>

namespace adfcm::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDataError = 3, kNumericError = 4 };

/// Runs one command line (argv[0] is the program name). Diagnostics go to
/// standard error; user-facing output goes to the files named by the flags.
int run(std::span<const std::string> args);

}  // namespace adfcm::cli
