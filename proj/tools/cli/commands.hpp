#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace sppal::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,         // bad flags or configuration
    kFailed = 2,        // a computation stage threw
    kWarningsFatal = 3  // outputs written but marked partial
};

struct RunResult {
    std::vector<Table> tables;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    std::uint64_t seed = 0;
};

// Computes every table of a command without touching the file system.
RunResult run_command(const std::string& command, const RunConfig& config);

std::string version();

// Full command-line entry point; returns the process exit status.
int run_main(int argc, char** argv);

}  // namespace sppal::cli
