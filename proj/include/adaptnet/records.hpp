#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include "adaptnet/complexity.hpp"
#include "adaptnet/model.hpp"
#include "adaptnet/scenarios.hpp"

namespace adaptnet {

/// One node's complexity profile within one replicate.
struct ProfileRecord {
  std::size_t replicate = 0;
  std::uint64_t replicate_seed = 0;
  std::size_t node = 0;
  Faction faction = Faction::Unclassified;
  ComplexityProfile profile;

  friend bool operator==(const ProfileRecord&, const ProfileRecord&) = default;
};

struct Transition {
  Faction from = Faction::Unclassified;
  Faction to = Faction::Unclassified;

  /// "A->H" style label.
  std::string label() const;
  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Paired baseline/intervention outcome for one focal node.
struct InterventionRecord {
  Transition transition;
  std::uint64_t t_star = 0;
  std::size_t replicate = 0;
  std::uint64_t replicate_seed = 0;
  std::size_t focal_node = 0;
  BehaviorParams original_params;
  BehaviorParams assigned_params;
  ComplexityProfile baseline_profile;
  ComplexityProfile intervention_profile;
  double delta = 0.0;
};

/// Mean of (intervention - baseline) over windows ending at or after
/// t_star + gap. Throws if the profiles are misaligned or no window
/// qualifies.
double intervention_delta(const ComplexityProfile& baseline, const ComplexityProfile& intervention,
                          std::uint64_t t_star, std::uint64_t gap);

}  // namespace adaptnet
