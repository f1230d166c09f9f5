#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace adaptnet {

/// Discrete bin indices. Symbol k stands for the bin midpoint k * bin_width.
struct SymbolSequence {
  std::vector<std::int64_t> symbols;
  std::size_t alphabet_size = 0;  // distinct symbols observed
};

struct ComplexityProfile {
  std::size_t node = 0;
  std::vector<std::uint64_t> window_ends;
  std::vector<double> nlz_values;

  friend bool operator==(const ComplexityProfile&, const ComplexityProfile&) = default;
};

/// Maps each opinion to round(x / bin_width), ties away from zero, so bins
/// are centered on zero. Throws std::invalid_argument for bin_width <= 0.
SymbolSequence discretize(std::span<const double> trajectory, double bin_width);

/// Start offsets of the components of the exhaustive LZ76 parse. A
/// component starting at l is the shortest s[l..l+k) that does not occur in
/// s[0..l+k-1); the trailing component may repeat earlier text.
std::vector<std::size_t> lz76_components(std::span<const std::int64_t> symbols);

/// Number of components in the LZ76 parse. Throws on an empty sequence.
std::size_t lz76(std::span<const std::int64_t> symbols);
inline std::size_t lz76(const SymbolSequence& s) { return lz76(std::span<const std::int64_t>(s.symbols)); }

/// LZ * log_base(n) / n. Requires n >= 2 and log_base >= 2.
double normalized_lz(std::span<const std::int64_t> symbols, double log_base = 2.0);
inline double normalized_lz(const SymbolSequence& s, double log_base = 2.0) {
  return normalized_lz(std::span<const std::int64_t>(s.symbols), log_base);
}

/// nLZ over the prefix windows [0, window_step], [0, 2 * window_step], ...
/// that fit inside the trajectory. Window [0, T] holds T + 1 samples.
///
/// The LZ76 parse of a prefix agrees with the parse of the whole sequence
/// up to the component that straddles the prefix end, which then becomes
/// the prefix's trailing component. One parse therefore serves every
/// window: LZ(prefix of length m) = number of components starting before m.
ComplexityProfile complexity_profile(std::span<const double> trajectory, double bin_width,
                                     std::size_t window_step, double log_base = 2.0);

/// Shannon entropy of ordinal patterns of the given order and delay,
/// divided by log(order!). Equal values keep their temporal order.
double permutation_entropy(std::span<const double> trajectory, std::size_t order = 4,
                           std::size_t delay = 1);

}  // namespace adaptnet
