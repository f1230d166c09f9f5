#include "adaptnet/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

namespace adaptnet {

SymbolSequence discretize(std::span<const double> trajectory, double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw std::invalid_argument(fmt::format("bin width must be positive, got {}", bin_width));
  SymbolSequence out;
  out.symbols.reserve(trajectory.size());
  std::unordered_set<std::int64_t> seen;
  for (double x : trajectory) {
    if (!std::isfinite(x)) throw std::invalid_argument("cannot discretize a non-finite opinion");
    // std::round rounds half-way cases away from zero.
    const auto k = static_cast<std::int64_t>(std::round(x / bin_width));
    out.symbols.push_back(k);
    seen.insert(k);
  }
  out.alphabet_size = seen.size();
  return out;
}

// Kaspar & Schuster's scan: `history` walks candidate start positions in the
// already-parsed text while `len` extends the current match; a component ends
// when no history position can extend as far as the longest attempt.
std::vector<std::size_t> lz76_components(std::span<const std::int64_t> s) {
  const std::size_t n = s.size();
  if (n == 0) throw std::invalid_argument("LZ76 needs a non-empty sequence");
  std::vector<std::size_t> starts{0};
  if (n == 1) return starts;

  std::size_t start = 1;
  std::size_t history = 0;
  std::size_t len = 1;
  std::size_t longest = 1;
  starts.push_back(start);
  for (;;) {
    if (s[history + len - 1] == s[start + len - 1]) {
      ++len;
      if (start + len > n) break;
    } else {
      longest = std::max(len, longest);
      ++history;
      if (history == start) {
        start += longest;
        if (start >= n) break;
        starts.push_back(start);
        history = 0;
        longest = 1;
      }
      len = 1;
    }
  }
  return starts;
}

std::size_t lz76(std::span<const std::int64_t> symbols) { return lz76_components(symbols).size(); }

namespace {

double normalize(std::size_t lz, std::size_t n, double log_base) {
  return static_cast<double>(lz) * (std::log(static_cast<double>(n)) / std::log(log_base)) /
         static_cast<double>(n);
}

void check_log_base(double log_base) {
  if (!(log_base >= 2.0) || !std::isfinite(log_base))
    throw std::invalid_argument(fmt::format("log base must be >= 2, got {}", log_base));
}

}  // namespace

double normalized_lz(std::span<const std::int64_t> symbols, double log_base) {
  check_log_base(log_base);
  if (symbols.size() < 2)
    throw std::invalid_argument("normalized LZ needs at least two symbols");
  return normalize(lz76(symbols), symbols.size(), log_base);
}

ComplexityProfile complexity_profile(std::span<const double> trajectory, double bin_width,
                                     std::size_t window_step, double log_base) {
  check_log_base(log_base);
  if (window_step == 0) throw std::invalid_argument("window step must be positive");
  if (trajectory.size() < window_step + 1)
    throw std::invalid_argument(fmt::format(
        "trajectory of length {} is shorter than the first window [0, {}]", trajectory.size(),
        window_step));

  const auto seq = discretize(trajectory, bin_width);
  const auto starts = lz76_components(seq.symbols);

  ComplexityProfile profile;
  for (std::size_t end = window_step; end < trajectory.size(); end += window_step) {
    const std::size_t m = end + 1;
    const auto lz = static_cast<std::size_t>(
        std::lower_bound(starts.begin(), starts.end(), m) - starts.begin());
    profile.window_ends.push_back(end);
    profile.nlz_values.push_back(normalize(lz, m, log_base));
  }
  return profile;
}

double permutation_entropy(std::span<const double> trajectory, std::size_t order,
                           std::size_t delay) {
  if (order < 2 || order > 10) throw std::invalid_argument("permutation order must be in [2, 10]");
  if (delay == 0) throw std::invalid_argument("permutation delay must be positive");
  if (trajectory.size() < order * delay)
    throw std::invalid_argument(fmt::format(
        "trajectory of length {} is too short for order {} and delay {}", trajectory.size(), order,
        delay));

  std::size_t patterns = 1;
  for (std::size_t k = 2; k <= order; ++k) patterns *= k;
  std::vector<std::size_t> counts(patterns, 0);

  const std::size_t span_len = (order - 1) * delay;
  const std::size_t total = trajectory.size() - span_len;
  std::vector<std::size_t> idx(order);
  std::vector<bool> used(order);
  for (std::size_t t = 0; t < total; ++t) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) {
      return trajectory[t + p * delay] < trajectory[t + q * delay];
    });
    // Lehmer code of the ranking permutation.
    std::fill(used.begin(), used.end(), false);
    std::size_t code = 0;
    for (std::size_t k = 0; k < order; ++k) {
      std::size_t smaller = 0;
      for (std::size_t r = 0; r < idx[k]; ++r)
        if (!used[r]) ++smaller;
      used[idx[k]] = true;
      code = code * (order - k) + smaller;
    }
    ++counts[code];
  }

  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(patterns));
}

}  // namespace adaptnet
