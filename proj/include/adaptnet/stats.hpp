#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adaptnet/records.hpp"

namespace adaptnet {

/// Unweighted mean of node nLZ within one (replicate, faction) group.
struct ReplicateMean {
  std::size_t replicate = 0;
  Faction faction = Faction::Unclassified;
  std::size_t node_count = 0;
  std::vector<std::uint64_t> window_ends;
  std::vector<double> mean;
};

struct ReplicateMeans {
  std::vector<ReplicateMean> groups;  // sorted by (faction, replicate)
  std::vector<std::string> warnings;
};

/// Groups records by (replicate, faction). Factions listed in `requested`
/// that have no nodes in some replicate are reported in warnings and
/// omitted. Throws if profiles in one group disagree on window ends.
ReplicateMeans replicate_means(std::span<const ProfileRecord> records,
                               std::span<const Faction> requested = {});

struct BootstrapOptions {
  std::size_t resamples = 10000;
  double confidence = 0.95;
};

struct TrajectoryBand {
  Faction faction = Faction::Unclassified;
  std::vector<std::uint64_t> window_ends;
  std::vector<double> mean;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::size_t replicate_count = 0;
};

/// Percentile bootstrap over replicate-level trajectories. Each resample
/// draws whole trajectories with replacement from its own substream of
/// `seed`, so the band does not depend on evaluation order.
TrajectoryBand bootstrap_band(std::span<const std::vector<double>> trajectories,
                              std::span<const std::uint64_t> window_ends,
                              const BootstrapOptions& options, std::uint64_t seed);

/// Bands for every faction with at least two replicates. Factions with
/// fewer are skipped and noted in `warnings` when provided.
std::vector<TrajectoryBand> faction_bands(const ReplicateMeans& means, const BootstrapOptions& options,
                                          std::uint64_t master_seed,
                                          std::vector<std::string>* warnings = nullptr);

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;
  std::size_t degrees_of_freedom = 0;
};

/// Two-sided one-sample t-test against zero. Throws std::invalid_argument
/// for n < 2 or zero sample variance.
TTestResult one_sample_t(std::span<const double> values);

/// mean / unbiased standard deviation. Same preconditions as one_sample_t.
double cohens_d(std::span<const double> values);

/// One star for p < 1e-2, another for each further decade.
std::string significance_stars(double p);

struct EffectSummary {
  Transition transition;
  std::uint64_t t_star = 0;
  std::size_t runs = 0;
  double delta_mean = 0.0;
  double ci_half_width = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  double cohens_d = 0.0;
  std::string stars;
};

/// Student-t summary of per-run deltas, where a run is one replicate and the
/// deltas of its focal nodes are averaged. All records must share transition
/// and t_star.
EffectSummary summarize_effect(std::span<const InterventionRecord> records, double confidence = 0.95);

}  // namespace adaptnet
