#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adaptnet/model.hpp"
#include "adaptnet/seeding.hpp"

namespace adaptnet {

enum class Faction { Homophilic, Neophilic, Conformic, Unclassified };

inline constexpr std::array<Faction, 3> kBehavioralFactions{Faction::Homophilic, Faction::Neophilic,
                                                           Faction::Conformic};

std::string_view to_string(Faction f);
/// Accepts full names ("homophilic") and the one-letter codes H, A, C.
std::optional<Faction> parse_faction(std::string_view s);
/// One-letter code: H, A, C (U for unclassified).
char faction_code(Faction f);

enum class ScenarioKind { PureHomophilic, PureNeophilic, PureConformic, Dual, Mixed };

std::string_view to_string(ScenarioKind k);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view s);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Mixed;
  std::array<Faction, 2> dual{Faction::Homophilic, Faction::Neophilic};
  std::size_t n = 300;
  std::size_t replicate_count = 10;
  double dominant_mean = 0.25;
  double recessive_mean = 0.05;
  double spread = 0.025;  // standard deviation of the normal draws
  double uniform_low = 0.05;
  double uniform_high = 0.3;
  // Initial condition: complete digraph without self loops.
  double opinion_low = -1.0;
  double opinion_high = 1.0;
  double weight_low = 0.0;
  double weight_high = 1.0;
  bool shuffle_dual = false;

  /// Throws std::invalid_argument naming the offending field. A zero
  /// spread is accepted as a degenerate sampling config.
  void validate() const;
  std::string label() const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Normal draws for a behavioral faction (dominant parameter boosted,
/// negatives clamped to 0), or uniform draws for Unclassified in a mixed
/// scenario.
BehaviorParams sample_params(const ScenarioSpec& spec, Faction faction, Engine& rng);

/// Dominant-faction draw independent of the scenario kind.
BehaviorParams sample_dominant(const ScenarioSpec& spec, Faction faction, Engine& rng);

/// A node is labeled F iff F's parameter is the strict maximum of (h, a, c)
/// and exceeds tau.
Faction classify(const BehaviorParams& p, double tau);

struct LabeledNetwork {
  NetworkState state;
  std::vector<Faction> labels;
};

/// Builds the initial network. Mixed scenarios come back Unclassified; use
/// classify() to label them.
LabeledNetwork build_network(const ScenarioSpec& spec, Engine& rng);

}  // namespace adaptnet
