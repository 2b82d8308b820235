// commands.hpp — experiment drivers behind the geomwork subcommands.

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "geomwork/app/config.hpp"

namespace geomwork::app {

enum ExitCode : int { kSuccess = 0, kNumericFailure = 1, kConfigInvalid = 2 };

struct RunOptions {
    std::size_t threads = 1;
    bool dump_trajectories = false;
};

struct CommandOutput {
    int exit_code = kSuccess;
    // (file name, contents); data files are deterministic for a given config
    std::vector<std::pair<std::string, std::string>> files;
    // Command-specific results merged into metadata.json.
    std::string metadata_json = "{}";
    // Human-readable report printed to stdout.
    std::string summary;
};

CommandOutput cmd_field(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_loops(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_orientation(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_quasistatic(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_scaling(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_ssh(const ExperimentConfig& config, const RunOptions& opts);

// Dispatch on config.command. Numeric errors become kNumericFailure.
CommandOutput run_command(const ExperimentConfig& config, const RunOptions& opts);

// Writes config_echo.json, the data files and metadata.json (with a timestamp)
// into `dir`, creating it if needed.
void write_run_directory(const std::string& dir, const ExperimentConfig& config,
                         const CommandOutput& output);

} // namespace geomwork::app
