#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace adaptnet {

/// Per-node behavioral coefficients. All three are finite and >= 0.
struct BehaviorParams {
  double homophily = 0.0;   // h
  double novelty = 0.0;     // a, attention to novelty
  double conformity = 0.0;  // c

  friend bool operator==(const BehaviorParams&, const BehaviorParams&) = default;
};

struct ModelConstants {
  double theta_h = 0.3;
  double theta_a = 0.3;
  double dt = 0.1;
  double noise_sigma = 1.0;  // per-step increment has std dt * noise_sigma

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const ModelConstants&, const ModelConstants&) = default;
};

/// Opinions, a dense n x n weight matrix and per-node parameters at one
/// discrete time index. weights are row-major with row = target i and
/// column = source j, so weight(i, j) is the flow of information j -> i.
struct NetworkState {
  std::vector<double> opinions;
  std::vector<double> weights;
  std::vector<BehaviorParams> params;
  std::uint64_t step = 0;

  NetworkState() = default;
  explicit NetworkState(std::size_t n);

  std::size_t size() const noexcept { return opinions.size(); }
  double weight(std::size_t i, std::size_t j) const noexcept { return weights[i * size() + j]; }
  double& weight(std::size_t i, std::size_t j) noexcept { return weights[i * size() + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {weights.data() + i * size(), size()};
  }

  /// Checks shapes, finiteness, non-negative weights, zero diagonal and
  /// non-negative parameters. Throws std::invalid_argument.
  void validate() const;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

/// Raised when an Euler step produces a non-finite opinion or weight.
class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(std::uint64_t step, std::size_t node, const char* what_field);
  std::uint64_t step() const noexcept { return step_; }
  std::size_t node() const noexcept { return node_; }

 private:
  std::uint64_t step_;
  std::size_t node_;
};

/// Counter-based Gaussian noise source. The draws for step t depend only on
/// (seed, t), so the stream position is fully described by the state's step
/// index and two runs that share a seed share every noise realization.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) noexcept : seed_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }

  /// Fills out with i.i.d. N(0, sigma) draws for the given step.
  void fill(std::uint64_t step, double sigma, std::span<double> out) const;

 private:
  std::uint64_t seed_;
};

double perceived_norm(const NetworkState& state, std::size_t i);

inline double behavior_fh(double xi, double xj, double theta_h) noexcept {
  return theta_h - (xi > xj ? xi - xj : xj - xi);
}

inline double behavior_fa(double norm_i, double xj, double theta_a) noexcept {
  return (norm_i > xj ? norm_i - xj : xj - norm_i) - theta_a;
}

/// Reusable buffers for in-place stepping.
struct StepScratch {
  std::vector<double> norms;
  std::vector<double> noise;
  std::vector<double> next_opinions;
};

/// Advances state by one synchronous forward-Euler step in place.
void advance(NetworkState& state, const ModelConstants& constants, const NoiseStream& noise,
             StepScratch& scratch);

/// Pure form of advance().
NetworkState euler_step(const NetworkState& state, const ModelConstants& constants,
                        const NoiseStream& noise);

/// Node-major opinion histories: trajectories[i][k] is node i's opinion at
/// the k-th recorded step.
using Trajectories = std::vector<std::vector<double>>;

/// Steps `state` forward `steps` times, appending each node's opinion after
/// every step to `out` (which must already hold one vector per node).
void continue_simulation(NetworkState& state, const ModelConstants& constants,
                         std::uint64_t steps, const NoiseStream& noise, Trajectories& out);

/// Runs `steps` Euler steps from `initial`, recording opinions at every
/// step including t = initial.step. Each trajectory has steps + 1 samples.
Trajectories run_simulation(const NetworkState& initial, const ModelConstants& constants,
                            std::uint64_t steps, const NoiseStream& noise);

}  // namespace adaptnet
