#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "adaptnet/config.hpp"

namespace adaptnet {

// Each command writes its files through an OutputSet: on any error nothing
// it started is left behind and the exception propagates.

/// profiles.csv, bands.csv, config.json, metadata.json
void command_simulate(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// intervention_records.csv, effects.csv, intervention_bands.csv,
/// config.json, metadata.json; plus snapshots/ when `snapshots` is set.
void command_intervene(const RunConfig& config, const std::filesystem::path& out, std::ostream& log,
                       bool snapshots = false);

/// One subdirectory "<axis>=<value>" per sweep value with the files of
/// simulate (bin_width, scenario axes) or intervene (t_star axis).
void command_sweep(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// Recomputes bands.csv from in/profiles.csv and effects.csv plus
/// intervention_bands.csv from in/intervention_records.csv, whichever
/// exist. The master seed comes from the files unless overridden.
void command_analyze(const std::filesystem::path& in, const std::filesystem::path& out,
                     const BootstrapOptions& bootstrap, std::optional<std::uint64_t> seed_override,
                     std::ostream& log);

}  // namespace adaptnet
