#pragma once

#include <string>
#include <vector>

namespace pairscan::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitEndpoint = 3,
};

/// Entry point shared by main() and in-process callers. args excludes the
/// program name.
int run(const std::vector<std::string>& args);

/// Makes a running mock-serve return.
void request_stop() noexcept;

}  // namespace pairscan::cli
