#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace adaptnet {

using Engine = std::mt19937_64;

/// Purpose tags for seed derivation. Values are part of the output format
/// (they feed the recorded seed lineage) and must not be renumbered.
enum class SeedPurpose : std::uint64_t {
  Init = 1,       // network construction
  Noise = 2,      // per-step opinion noise
  Focal = 3,      // focal node choice
  Reassign = 4,   // intervention parameter draws
  Bootstrap = 5,  // resampling
};

/// Lineage: master -> replicate -> branch -> purpose. Every component is
/// folded through std::seed_seq so nearby inputs give unrelated outputs.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

inline std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate) {
  return derive_seed({master, replicate});
}

inline std::uint64_t purpose_seed(std::uint64_t replicate_seed, std::uint64_t branch,
                                  SeedPurpose purpose) {
  return derive_seed({replicate_seed, branch, static_cast<std::uint64_t>(purpose)});
}

Engine make_engine(std::uint64_t seed);

/// 64-bit FNV-1a, used for config hashes and snapshot checksums.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace adaptnet
