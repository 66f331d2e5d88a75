#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "thzra/app/manifest.hpp"
#include "thzra/config.hpp"

namespace thzra::app {

struct CommandOptions
{
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> max_cells;  // sweep: stop after this many new cells
};

struct CommandResult
{
    int exit_code = 0;
    RunManifest manifest;
};

/// Loads, applies CLI overrides, validates.
ExperimentConfig load_experiment(const CommandOptions& opts);

CommandResult cmd_simulate(const CommandOptions& opts, std::ostream& log);
CommandResult cmd_analyze(const CommandOptions& opts, std::ostream& log);
CommandResult cmd_validate(const CommandOptions& opts, std::ostream& log);
CommandResult cmd_sweep(const CommandOptions& opts, std::ostream& log);

}  // namespace thzra::app
