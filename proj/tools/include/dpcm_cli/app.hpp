#pragma once

#include <iosfwd>

namespace dpcm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitParseError = 2,
  /// analyze: the eigenvector is inefficient; verify: some check failed.
  kExitNegative = 3,
};

/// Entry point of the dpcm tool; subcommands analyze, generate and verify.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dpcm::cli
