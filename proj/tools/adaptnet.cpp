#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "adaptnet/commands.hpp"
#include "adaptnet/config.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("-s,--seed", o.seed, "Master seed (overrides the config)");
  cmd->add_option("-o,--out", o.out, "Output directory (overrides the config)");
  cmd->add_option("-r,--replicates", o.replicates, "Replicate count (overrides the config)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("-j,--threads", o.threads, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
}

adaptnet::RunConfig resolve(const Overrides& o, std::optional<adaptnet::ExperimentType> type = std::nullopt) {
  auto config = adaptnet::load_config(o.config);
  if (type) config.experiment = *type;
  if (o.seed) config.master_seed = *o.seed;
  if (o.out) config.output_dir = *o.out;
  if (o.replicates) config.scenario.replicate_count = *o.replicates;
  if (o.threads) config.threads = *o.threads;
  // Overridden values are re-checked through the same strict parser.
  return adaptnet::parse_config(adaptnet::to_json(config));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive opinion network simulator and complexity analysis"};
  app.require_subcommand(1);

  Overrides sim_o, int_o, sweep_o;
  auto* sim = app.add_subcommand("simulate", "Run a scenario and write complexity profiles and faction bands");
  add_common(sim, sim_o);

  auto* intervene = app.add_subcommand("intervene", "Run the behavior-reassignment experiment");
  add_common(intervene, int_o);
  bool snapshots = false;
  intervene->add_flag("--snapshots", snapshots, "Also write the network snapshot taken at each t*");

  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over one parameter axis");
  add_common(sweep, sweep_o);

  auto* analyze = app.add_subcommand("analyze", "Recompute bands and effect statistics from written results");
  std::string in_dir;
  std::optional<std::string> analyze_out;
  std::optional<std::uint64_t> analyze_seed;
  adaptnet::BootstrapOptions bootstrap;
  analyze->add_option("-i,--in", in_dir, "Directory holding profiles.csv and/or intervention_records.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  analyze->add_option("-o,--out", analyze_out, "Output directory (default: the input directory)");
  analyze->add_option("-s,--seed", analyze_seed, "Bootstrap master seed (default: taken from the input)");
  analyze->add_option("--resamples", bootstrap.resamples, "Bootstrap resamples")->capture_default_str();
  analyze->add_option("--confidence", bootstrap.confidence, "Confidence level")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const auto config = resolve(sim_o, adaptnet::ExperimentType::Study);
      adaptnet::command_simulate(config, config.output_dir, std::cerr);
    } else if (*intervene) {
      const auto config = resolve(int_o, adaptnet::ExperimentType::Intervention);
      adaptnet::command_intervene(config, config.output_dir, std::cerr, snapshots);
    } else if (*sweep) {
      const auto config = resolve(sweep_o);
      if (config.experiment != adaptnet::ExperimentType::Sweep)
        throw adaptnet::ConfigError("experiment.type: sweep requires type \"sweep\" with experiment.sweep");
      adaptnet::command_sweep(config, config.output_dir, std::cerr);
    } else if (*analyze) {
      adaptnet::command_analyze(in_dir, analyze_out.value_or(in_dir), bootstrap, analyze_seed, std::cerr);
    }
  } catch (const adaptnet::ConfigError& e) {
    std::cerr << "adaptnet: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "adaptnet: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
