#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace mprofile::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInterrupted = 3,
};

/// Runs one invocation. `args` excludes the program name. Primary output
/// goes to `out`, diagnostics and progress to `err`. `cancel` is polled by
/// the runtime; the binary points it at a flag raised by SIGINT/SIGTERM.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const std::atomic<bool>* cancel = nullptr);

}  // namespace mprofile::cli
