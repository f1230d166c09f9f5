#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adaptnet/model.hpp"
#include "adaptnet/records.hpp"
#include "adaptnet/scenarios.hpp"
#include "adaptnet/stats.hpp"

namespace adaptnet {

/// Settings that turn trajectories into complexity profiles.
struct AnalysisOptions {
  std::uint64_t steps = 3000;
  std::size_t window_step = 300;
  double bin_width = 0.75;
  double log_base = 2.0;
  double tau = 0.25;  // dominance threshold for labeling mixed networks

  void validate() const;
  friend bool operator==(const AnalysisOptions&, const AnalysisOptions&) = default;
};

/// Raw simulation output of one replicate, kept so analysis-side settings
/// can be re-applied without re-simulating.
struct ReplicateRun {
  std::size_t replicate = 0;
  std::uint64_t replicate_seed = 0;
  std::vector<Faction> labels;
  Trajectories trajectories;
};

/// Runs spec.replicate_count independent simulations of `steps` steps.
/// Replicate r draws its network from purpose_seed(replicate_seed(master, r),
/// 0, Init) and its noise from the matching Noise seed. Output is ordered by
/// replicate id regardless of `threads`.
std::vector<ReplicateRun> simulate_replicates(const ScenarioSpec& spec, const ModelConstants& constants,
                                              const AnalysisOptions& analysis, std::uint64_t master_seed,
                                              std::size_t threads = 1);

/// Profiles for every node of every run, sorted by (replicate, node).
std::vector<ProfileRecord> profile_runs(const std::vector<ReplicateRun>& runs,
                                        const AnalysisOptions& analysis);

std::vector<ProfileRecord> run_scenario_study(const ScenarioSpec& spec, const ModelConstants& constants,
                                              const AnalysisOptions& analysis, std::uint64_t master_seed,
                                              std::size_t threads = 1);

/// Dominance labeling of every node; see classify().
std::map<Faction, std::vector<std::size_t>> select_focal_nodes(const NetworkState& state, double tau);

/// Fresh parameters with the target behavior dominant, independent of any
/// prior values.
BehaviorParams reassign_params(Faction target, const ScenarioSpec& sampling, Engine& rng);

/// Full network copies keyed by step. The stream position of the noise is
/// the state's step index, so a copy is all a continuation needs.
using SnapshotArchive = std::map<std::uint64_t, NetworkState>;

enum class ReassignMode {
  Resample,  // draw dominant-target parameters
  Keep,      // null intervention: focal parameters left untouched
};

struct InterventionOptions {
  std::vector<Transition> transitions;
  std::vector<std::uint64_t> t_stars{600};
  std::size_t focal_nodes = 1;  // per replicate, transition and t*
  std::uint64_t effect_gap = 300;
  ReassignMode mode = ReassignMode::Resample;
  bool keep_snapshots = false;

  void validate(const AnalysisOptions& analysis) const;
};

struct InterventionResult {
  std::vector<InterventionRecord> records;  // sorted by (t*, transition, replicate, focal node)
  std::vector<std::string> warnings;
  std::map<std::size_t, SnapshotArchive> snapshots;  // by replicate, when requested
  std::map<std::size_t, std::uint64_t> noise_seeds;  // by replicate, alongside snapshots
};

/// For each replicate: simulate to each t*, snapshot, pick focal nodes of
/// the from-faction, then continue from the snapshot twice to
/// analysis.steps: the baseline unchanged and the intervention with the
/// focal node's parameters reassigned. Both continuations reuse the
/// replicate's noise stream. Replicates without an eligible focal node are
/// skipped with a warning; if every replicate is skipped for some
/// (transition, t*), throws std::runtime_error.
InterventionResult run_intervention(const ScenarioSpec& spec, const ModelConstants& constants,
                                    const AnalysisOptions& analysis, const InterventionOptions& options,
                                    std::uint64_t master_seed, std::size_t threads = 1);

/// Focal nodes eligible for `from`: every node of a pure network, the
/// construction labels of a dual network, dominance labels otherwise.
std::vector<std::size_t> eligible_focal_nodes(const ScenarioSpec& spec, const std::vector<Faction>& labels,
                                              const NetworkState& state, Faction from, double tau);

/// Labels used for faction aggregation: construction labels, or dominance
/// labels for mixed networks.
std::vector<Faction> analysis_labels(const ScenarioSpec& spec, const std::vector<Faction>& construction,
                                     const NetworkState& initial, double tau);

enum class SweepAxis { BinWidth, TStar, Scenario };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view s);

struct SweepEntry {
  std::string value;  // textual sweep value, used to tag outputs
  ScenarioSpec spec;
  AnalysisOptions analysis;
  std::vector<ProfileRecord> profiles;       // bin_width and scenario sweeps
  InterventionResult interventions;          // t_star sweeps
};

/// Runs the base study once per value. A bin_width sweep simulates once and
/// re-bins the stored trajectories for each width. Scenario values use
/// ScenarioSpec::label() spellings (e.g. "pure-homophilic", "dual-H-A").
std::vector<SweepEntry> sweep(SweepAxis axis, const std::vector<std::string>& values,
                              const ScenarioSpec& spec, const ModelConstants& constants,
                              const AnalysisOptions& analysis, const InterventionOptions& intervention,
                              std::uint64_t master_seed, std::size_t threads = 1);

/// Parses a ScenarioSpec::label() spelling into kind (and dual factions).
ScenarioSpec with_scenario_label(ScenarioSpec base, std::string_view label);

}  // namespace adaptnet
