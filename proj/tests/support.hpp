#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "adaptnet/model.hpp"

namespace testing {

inline adaptnet::NetworkState random_state(std::size_t n, std::mt19937_64& rng, double param_high = 0.5) {
  std::uniform_real_distribution<double> opinion(-2.0, 2.0), weight(0.0, 1.0), param(0.0, param_high);
  adaptnet::NetworkState s(n);
  for (auto& x : s.opinions) x = opinion(rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s.weight(i, j) = i == j ? 0.0 : weight(rng);
  for (auto& p : s.params) p = {param(rng), param(rng), param(rng)};
  return s;
}

/// Textbook forward-Euler step written straight from the update equations.
/// `noise` holds the per-node Gaussian draws for this step.
inline adaptnet::NetworkState reference_step(const adaptnet::NetworkState& s, const adaptnet::ModelConstants& k,
                                             const std::vector<double>& noise) {
  const std::size_t n = s.size();
  std::vector<double> norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    double num = 0, den = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      num += s.weight(i, j) * s.opinions[j];
      den += s.weight(i, j);
    }
    norm[i] = den == 0 ? s.opinions[i] : num / den;
  }
  adaptnet::NetworkState next = s;
  next.step = s.step + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = s.params[i];
    next.opinions[i] = s.opinions[i] + k.dt * p.conformity * (norm[i] - s.opinions[i]) + k.dt * noise[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double fh = k.theta_h - std::abs(s.opinions[i] - s.opinions[j]);
      const double fa = std::abs(norm[i] - s.opinions[j]) - k.theta_a;
      next.weight(i, j) = std::max(0.0, s.weight(i, j) + k.dt * (p.homophily * fh + p.novelty * fa));
    }
  }
  return next;
}

inline std::vector<std::int64_t> symbols_of(const std::string& s) {
  std::vector<std::int64_t> out;
  for (char ch : s) out.push_back(ch - '0');
  return out;
}

}  // namespace testing
