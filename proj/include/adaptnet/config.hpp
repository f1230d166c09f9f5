#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adaptnet/experiments.hpp"
#include "adaptnet/model.hpp"
#include "adaptnet/scenarios.hpp"
#include "adaptnet/stats.hpp"

namespace adaptnet {

enum class ExperimentType { Study, Intervention, Sweep };

std::string_view to_string(ExperimentType t);

struct RunConfig {
  ScenarioSpec scenario;
  ModelConstants constants;
  AnalysisOptions analysis;
  BootstrapOptions bootstrap;
  std::uint64_t master_seed = 0;
  ExperimentType experiment = ExperimentType::Study;
  InterventionOptions intervention;
  SweepAxis sweep_axis = SweepAxis::BinWidth;
  std::vector<std::string> sweep_values;
  std::string output_dir = "out";
  std::size_t threads = 1;
};

/// Configuration problem; what() starts with the dotted field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All six ordered pairs of behavioral factions.
std::vector<Transition> all_transitions();

/// "A->H", "H->C", ... (codes or full faction names around "->").
Transition parse_transition(std::string_view s);

/// Strict parse: unknown keys and wrong types are rejected; missing optional
/// fields take their defaults. Required: seed, scenario.kind.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Every field written out, defaults included.
nlohmann::json to_json(const RunConfig& config);

/// Hex FNV-1a of the canonical JSON form, excluding output_dir and threads
/// (which do not affect results).
std::string config_hash(const RunConfig& config);

}  // namespace adaptnet
