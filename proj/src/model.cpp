#include "adaptnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <fmt/format.h>

#include "adaptnet/seeding.hpp"

namespace adaptnet {

void ModelConstants::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("model.dt must be > 0");
  if (!(theta_h >= 0.0) || !std::isfinite(theta_h))
    throw std::invalid_argument("model.theta_h must be >= 0");
  if (!(theta_a >= 0.0) || !std::isfinite(theta_a))
    throw std::invalid_argument("model.theta_a must be >= 0");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw std::invalid_argument("model.noise_sigma must be >= 0");
}

NetworkState::NetworkState(std::size_t n) : opinions(n, 0.0), weights(n * n, 0.0), params(n) {}

void NetworkState::validate() const {
  const auto n = size();
  if (weights.size() != n * n || params.size() != n)
    throw std::invalid_argument("network state has inconsistent shapes");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(opinions[i]))
      throw std::invalid_argument(fmt::format("opinion of node {} is not finite", i));
    if (weight(i, i) != 0.0)
      throw std::invalid_argument(fmt::format("self weight of node {} is non-zero", i));
    const auto& p = params[i];
    for (double v : {p.homophily, p.novelty, p.conformity})
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(fmt::format("parameters of node {} must be finite and >= 0", i));
    for (double w : row(i))
      if (!(w >= 0.0) || !std::isfinite(w))
        throw std::invalid_argument(fmt::format("row {} holds a negative or non-finite weight", i));
  }
}

NumericalBlowup::NumericalBlowup(std::uint64_t step, std::size_t node, const char* what_field)
    : std::runtime_error(
          fmt::format("numerical blow-up at step {}: non-finite {} for node {}", step, what_field, node)),
      step_(step),
      node_(node) {}

void NoiseStream::fill(std::uint64_t step, double sigma, std::span<double> out) const {
  if (sigma == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  Engine eng = make_engine(derive_seed({seed_, step}));
  std::normal_distribution<double> dist(0.0, sigma);
  for (auto& v : out) v = dist(eng);
}

double perceived_norm(const NetworkState& state, std::size_t i) {
  const auto w = state.row(i);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    num += w[j] * state.opinions[j];
    den += w[j];
  }
  return den > 0.0 ? num / den : state.opinions[i];
}

void advance(NetworkState& state, const ModelConstants& constants, const NoiseStream& noise,
             StepScratch& scratch) {
  const std::size_t n = state.size();
  const double dt = constants.dt;
  scratch.norms.resize(n);
  scratch.noise.resize(n);
  scratch.next_opinions.resize(n);

  for (std::size_t i = 0; i < n; ++i) scratch.norms[i] = perceived_norm(state, i);
  noise.fill(state.step, constants.noise_sigma, scratch.noise);

  const auto& x = state.opinions;
  for (std::size_t i = 0; i < n; ++i) {
    const double next =
        x[i] + dt * state.params[i].conformity * (scratch.norms[i] - x[i]) + dt * scratch.noise[i];
    if (!std::isfinite(next)) throw NumericalBlowup(state.step, i, "opinion");
    scratch.next_opinions[i] = next;
  }

  // Weight rows only read pre-step opinions and norms, so updating them in
  // place keeps the step synchronous.
  for (std::size_t i = 0; i < n; ++i) {
    const double h = dt * state.params[i].homophily;
    const double a = dt * state.params[i].novelty;
    if (h == 0.0 && a == 0.0) continue;
    const double xi = x[i];
    const double norm = scratch.norms[i];
    double* row = state.weights.data() + i * n;
    const double theta_h = constants.theta_h;
    const double theta_a = constants.theta_a;
    double acc = 0.0;
    auto update = [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        const double xj = x[j];
        const double w =
            row[j] + h * behavior_fh(xi, xj, theta_h) + a * behavior_fa(norm, xj, theta_a);
        acc += w;
        row[j] = w > 0.0 ? w : 0.0;
      }
    };
    update(0, i);
    update(i + 1, n);
    const bool finite = std::isfinite(acc);
    if (!finite) throw NumericalBlowup(state.step, i, "edge weight");
  }

  state.opinions.swap(scratch.next_opinions);
  ++state.step;
}

NetworkState euler_step(const NetworkState& state, const ModelConstants& constants,
                        const NoiseStream& noise) {
  NetworkState next = state;
  StepScratch scratch;
  advance(next, constants, noise, scratch);
  return next;
}

void continue_simulation(NetworkState& state, const ModelConstants& constants,
                         std::uint64_t steps, const NoiseStream& noise, Trajectories& out) {
  const std::size_t n = state.size();
  if (out.size() != n) throw std::invalid_argument("trajectory buffer does not match node count");
  for (auto& t : out) t.reserve(t.size() + steps);
  StepScratch scratch;
  for (std::uint64_t s = 0; s < steps; ++s) {
    advance(state, constants, noise, scratch);
    for (std::size_t i = 0; i < n; ++i) out[i].push_back(state.opinions[i]);
  }
}

Trajectories run_simulation(const NetworkState& initial, const ModelConstants& constants,
                            std::uint64_t steps, const NoiseStream& noise) {
  NetworkState state = initial;
  Trajectories out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    out[i].reserve(steps + 1);
    out[i].push_back(state.opinions[i]);
  }
  continue_simulation(state, constants, steps, noise, out);
  return out;
}

}  // namespace adaptnet
