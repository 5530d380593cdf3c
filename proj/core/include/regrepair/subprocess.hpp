#pragma once

#include <chrono>
#include <filesystem>
#include <string>

namespace regrepair {

struct RunResult {
    int exit_code{0};
    bool timed_out{false};
    bool signaled{false};
    int signal_no{0};
    std::string output;  // stdout and stderr interleaved
};

/// Runs `command` via /bin/sh -c with `cwd` as working directory. The whole
/// process group is killed when the wall-clock timeout expires.
RunResult run_shell(const std::string& command,
                    const std::filesystem::path& cwd,
                    std::chrono::milliseconds timeout);

}  // namespace regrepair
