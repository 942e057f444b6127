#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "rte/io/config.hpp"

namespace rte::io {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRefused = 2;

struct CommandOptions {
    Mode mode = Mode::Check;
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;  // overrides output.directory
    bool force = false;                        // bypass the stability gate
    int threads = 0;                           // 0: OpenMP default
};

/// Runs one subcommand end to end and writes manifest.json into the output
/// directory whenever that directory is known, including on refusal or
/// failure. Returns the exit code.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace rte::io
