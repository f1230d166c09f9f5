#include "adaptnet/commands.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "adaptnet/experiments.hpp"
#include "adaptnet/io.hpp"
#include "adaptnet/seeding.hpp"
#include "adaptnet/stats.hpp"

namespace adaptnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<Faction> scenario_factions(const ScenarioSpec& spec) {
  switch (spec.kind) {
    case ScenarioKind::PureHomophilic: return {Faction::Homophilic};
    case ScenarioKind::PureNeophilic: return {Faction::Neophilic};
    case ScenarioKind::PureConformic: return {Faction::Conformic};
    case ScenarioKind::Dual: return {spec.dual[0], spec.dual[1]};
    case ScenarioKind::Mixed: break;
  }
  return {kBehavioralFactions.begin(), kBehavioralFactions.end()};
}

void emit(std::ostream& log, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) log << "warning: " << w << '\n';
}

std::string prefixed(const std::string& prefix, const char* name) {
  return prefix.empty() ? std::string(name) : prefix + "/" + name;
}

std::vector<TrajectoryBand> study_bands(std::span<const ProfileRecord> profiles,
                                        std::span<const Faction> requested, const BootstrapOptions& bootstrap,
                                        std::uint64_t master_seed, std::ostream& log) {
  // Unclassified nodes of mixed networks are not a faction.
  std::vector<ProfileRecord> labeled;
  std::copy_if(profiles.begin(), profiles.end(), std::back_inserter(labeled),
               [](const ProfileRecord& r) { return r.faction != Faction::Unclassified; });
  auto means = replicate_means(labeled, requested);
  emit(log, means.warnings);
  std::vector<std::string> warnings;
  auto bands = faction_bands(means, bootstrap, master_seed, &warnings);
  emit(log, warnings);
  return bands;
}

void write_study(OutputSet& outputs, const std::string& prefix, std::span<const ProfileRecord> profiles,
                 std::span<const Faction> requested, const BootstrapOptions& bootstrap, const RowMeta& meta,
                 std::ostream& log) {
  write_profiles_csv(outputs.open(prefixed(prefix, "profiles.csv")), profiles, meta);
  const auto bands = study_bands(profiles, requested, bootstrap, meta.master_seed, log);
  write_bands_csv(outputs.open(prefixed(prefix, "bands.csv")), bands, meta);
}

using GroupKey = std::tuple<std::uint64_t, Transition>;

std::map<GroupKey, std::vector<InterventionRecord>> by_group(std::span<const InterventionRecord> records) {
  std::map<GroupKey, std::vector<InterventionRecord>> groups;
  for (const auto& r : records) groups[{r.t_star, r.transition}].push_back(r);
  return groups;
}

std::vector<EffectSummary> effect_rows(std::span<const InterventionRecord> records, double confidence,
                                       std::ostream& log) {
  std::vector<EffectSummary> rows;
  for (const auto& [key, group] : by_group(records)) {
    try {
      rows.push_back(summarize_effect(group, confidence));
    } catch (const std::invalid_argument& e) {
      log << fmt::format("warning: {} at t*={}: {}; no effect row\n", std::get<1>(key).label(),
                         std::get<0>(key), e.what());
    }
  }
  return rows;
}

std::vector<InterventionBand> intervention_bands(std::span<const InterventionRecord> records,
                                                 const BootstrapOptions& bootstrap, std::uint64_t master_seed,
                                                 std::ostream& log) {
  std::vector<InterventionBand> out;
  for (const auto& [key, group] : by_group(records)) {
    const auto& [t_star, tr] = key;
    const auto& window_ends = group.front().baseline_profile.window_ends;
    for (int branch = 0; branch < 2; ++branch) {
      auto profile_of = [&](const InterventionRecord& r) -> const std::vector<double>& {
        return branch == 0 ? r.baseline_profile.nlz_values : r.intervention_profile.nlz_values;
      };
      // "node": every focal record; "run": focal records averaged per replicate.
      std::vector<std::vector<double>> per_node;
      std::map<std::size_t, std::pair<std::vector<double>, std::size_t>> per_run;
      for (const auto& r : group) {
        per_node.push_back(profile_of(r));
        auto& [sum, count] = per_run[r.replicate];
        if (sum.empty()) sum.assign(window_ends.size(), 0.0);
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += profile_of(r)[k];
        ++count;
      }
      std::vector<std::vector<double>> runs;
      for (auto& [rep, sc] : per_run) {
        for (auto& v : sc.first) v /= static_cast<double>(sc.second);
        runs.push_back(std::move(sc.first));
      }
      for (int agg = 0; agg < 2; ++agg) {
        const auto& series = agg == 0 ? per_node : runs;
        if (series.size() < 2) {
          log << fmt::format("warning: {} at t*={}: fewer than two series; no band\n", tr.label(), t_star);
          continue;
        }
        const auto seed = derive_seed({master_seed, static_cast<std::uint64_t>(SeedPurpose::Bootstrap), t_star,
                                       static_cast<std::uint64_t>(faction_code(tr.from)),
                                       static_cast<std::uint64_t>(faction_code(tr.to)),
                                       static_cast<std::uint64_t>(branch), static_cast<std::uint64_t>(agg)});
        InterventionBand row;
        row.transition = tr;
        row.t_star = t_star;
        row.branch = branch == 0 ? "baseline" : "intervention";
        row.aggregation = agg == 0 ? "node" : "run";
        row.band = bootstrap_band(series, window_ends, bootstrap, seed);
        out.push_back(std::move(row));
      }
    }
  }
  return out;
}

void write_interventions(OutputSet& outputs, const std::string& prefix,
                         std::span<const InterventionRecord> records, const BootstrapOptions& bootstrap,
                         const RowMeta& meta, std::ostream& log) {
  write_intervention_records_csv(outputs.open(prefixed(prefix, "intervention_records.csv")), records, meta);
  write_effects_csv(outputs.open(prefixed(prefix, "effects.csv")),
                    effect_rows(records, bootstrap.confidence, log), meta);
  write_intervention_bands_csv(outputs.open(prefixed(prefix, "intervention_bands.csv")),
                               intervention_bands(records, bootstrap, meta.master_seed, log), meta);
}

void write_config_and_metadata(OutputSet& outputs, const RunConfig& config, const std::string& command) {
  outputs.open("config.json") << to_json(config).dump(2) << '\n';

  json meta;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  meta["created_utc"] = stamp;
  meta["command"] = command;
  meta["config_hash"] = config_hash(config);
  meta["master_seed"] = config.master_seed;
  meta["seed_lineage"] =
      "replicate = derive(master, r); init/noise = derive(replicate, 0, purpose); "
      "focal/reassign = derive(replicate, derive(t*, from, to), purpose)";
  json reps = json::array();
  for (std::size_t r = 0; r < config.scenario.replicate_count; ++r)
    reps.push_back({{"replicate", r},
                    {"seed", replicate_seed(config.master_seed, r)},
                    {"init_seed", purpose_seed(replicate_seed(config.master_seed, r), 0, SeedPurpose::Init)},
                    {"noise_seed", purpose_seed(replicate_seed(config.master_seed, r), 0, SeedPurpose::Noise)}});
  meta["replicates"] = reps;
  outputs.open("metadata.json") << meta.dump(2) << '\n';
}

RowMeta row_meta(const RunConfig& config) { return {config.master_seed, config_hash(config)}; }

}  // namespace

void command_simulate(const RunConfig& config, const fs::path& out, std::ostream& log) {
  OutputSet outputs(out);
  const auto profiles = run_scenario_study(config.scenario, config.constants, config.analysis,
                                           config.master_seed, config.threads);
  const auto factions = scenario_factions(config.scenario);
  write_study(outputs, "", profiles, factions, config.bootstrap, row_meta(config), log);
  write_config_and_metadata(outputs, config, "simulate");
  outputs.commit();
  log << fmt::format("simulate: {} profiles for {} replicates written to {}\n", profiles.size(),
                     config.scenario.replicate_count, out.string());
}

void command_intervene(const RunConfig& config, const fs::path& out, std::ostream& log, bool snapshots) {
  OutputSet outputs(out);
  auto options = config.intervention;
  options.keep_snapshots = snapshots;
  const auto result = run_intervention(config.scenario, config.constants, config.analysis, options,
                                       config.master_seed, config.threads);
  emit(log, result.warnings);
  write_interventions(outputs, "", result.records, config.bootstrap, row_meta(config), log);
  for (const auto& [rep, archive] : result.snapshots)
    for (const auto& [t_star, state] : archive) {
      auto& stream = outputs.open(fmt::format("snapshots/replicate{:03}_t{}.snap", rep, t_star));
      const auto bytes = encode_snapshot({state, result.noise_seeds.at(rep)});
      stream.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
  write_config_and_metadata(outputs, config, "intervene");
  outputs.commit();
  log << fmt::format("intervene: {} intervention records written to {}\n", result.records.size(), out.string());
}

void command_sweep(const RunConfig& config, const fs::path& out, std::ostream& log) {
  OutputSet outputs(out);
  const auto entries = sweep(config.sweep_axis, config.sweep_values, config.scenario, config.constants,
                             config.analysis, config.intervention, config.master_seed, config.threads);
  const auto meta = row_meta(config);
  for (const auto& e : entries) {
    const auto dir = fmt::format("{}={}", to_string(config.sweep_axis), e.value);
    if (config.sweep_axis == SweepAxis::TStar) {
      emit(log, e.interventions.warnings);
      write_interventions(outputs, dir, e.interventions.records, config.bootstrap, meta, log);
    } else {
      write_study(outputs, dir, e.profiles, scenario_factions(e.spec), config.bootstrap, meta, log);
    }
  }
  write_config_and_metadata(outputs, config, "sweep");
  outputs.commit();
  log << fmt::format("sweep: {} values of {} written to {}\n", entries.size(), to_string(config.sweep_axis),
                     out.string());
}

void command_analyze(const fs::path& in, const fs::path& out, const BootstrapOptions& bootstrap,
                     std::optional<std::uint64_t> seed_override, std::ostream& log) {
  const auto profiles_path = in / "profiles.csv";
  const auto records_path = in / "intervention_records.csv";
  const bool have_profiles = fs::exists(profiles_path);
  const bool have_records = fs::exists(records_path);
  if (!have_profiles && !have_records)
    throw std::runtime_error(
        fmt::format("analyze: neither profiles.csv nor intervention_records.csv found in '{}'", in.string()));

  OutputSet outputs(out);
  if (have_profiles) {
    std::ifstream f(profiles_path);
    RowMeta meta;
    const auto profiles = read_profiles_csv(f, &meta);
    if (seed_override) meta.master_seed = *seed_override;
    const auto bands = study_bands(profiles, {}, bootstrap, meta.master_seed, log);
    write_bands_csv(outputs.open("bands.csv"), bands, meta);
    log << fmt::format("analyze: {} bands from {} profiles\n", bands.size(), profiles.size());
  }
  if (have_records) {
    std::ifstream f(records_path);
    RowMeta meta;
    const auto records = read_intervention_records_csv(f, &meta);
    if (seed_override) meta.master_seed = *seed_override;
    write_effects_csv(outputs.open("effects.csv"), effect_rows(records, bootstrap.confidence, log), meta);
    write_intervention_bands_csv(outputs.open("intervention_bands.csv"),
                                 intervention_bands(records, bootstrap, meta.master_seed, log), meta);
    log << fmt::format("analyze: effects from {} intervention records\n", records.size());
  }
  outputs.commit();
}

}  // namespace adaptnet
