#include "adaptnet/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace adaptnet {

std::string_view to_string(Faction f) {
  switch (f) {
    case Faction::Homophilic: return "homophilic";
    case Faction::Neophilic: return "neophilic";
    case Faction::Conformic: return "conformic";
    case Faction::Unclassified: return "unclassified";
  }
  return "unclassified";
}

char faction_code(Faction f) {
  switch (f) {
    case Faction::Homophilic: return 'H';
    case Faction::Neophilic: return 'A';
    case Faction::Conformic: return 'C';
    case Faction::Unclassified: return 'U';
  }
  return 'U';
}

std::optional<Faction> parse_faction(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "homophilic" || lower == "h") return Faction::Homophilic;
  if (lower == "neophilic" || lower == "a") return Faction::Neophilic;
  if (lower == "conformic" || lower == "c") return Faction::Conformic;
  if (lower == "unclassified" || lower == "u") return Faction::Unclassified;
  return std::nullopt;
}

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::PureHomophilic: return "pure-homophilic";
    case ScenarioKind::PureNeophilic: return "pure-neophilic";
    case ScenarioKind::PureConformic: return "pure-conformic";
    case ScenarioKind::Dual: return "dual";
    case ScenarioKind::Mixed: return "mixed";
  }
  return "mixed";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view s) {
  for (auto k : {ScenarioKind::PureHomophilic, ScenarioKind::PureNeophilic,
                 ScenarioKind::PureConformic, ScenarioKind::Dual, ScenarioKind::Mixed})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

void ScenarioSpec::validate() const {
  if (n == 0) throw std::invalid_argument("scenario.n must be > 0");
  if (replicate_count == 0) throw std::invalid_argument("scenario.replicates must be > 0");
  if (!(spread >= 0.0) || !std::isfinite(spread))
    throw std::invalid_argument("scenario.spread must be >= 0");
  if (!(uniform_low < uniform_high)) throw std::invalid_argument("scenario.uniform_low must be < uniform_high");
  if (uniform_low < 0.0) throw std::invalid_argument("scenario.uniform_low must be >= 0");
  if (!(opinion_low < opinion_high)) throw std::invalid_argument("scenario.opinion_low must be < opinion_high");
  if (!(weight_low < weight_high) || weight_low < 0.0)
    throw std::invalid_argument("scenario.weight_low must be >= 0 and < weight_high");
  if (kind == ScenarioKind::Dual) {
    if (dual[0] == dual[1] || dual[0] == Faction::Unclassified || dual[1] == Faction::Unclassified)
      throw std::invalid_argument("scenario.factions must name two distinct behavioral factions");
  }
}

std::string ScenarioSpec::label() const {
  if (kind == ScenarioKind::Dual)
    return fmt::format("dual-{}-{}", faction_code(dual[0]), faction_code(dual[1]));
  return std::string(to_string(kind));
}

namespace {

double clamped_normal(double mean, double sd, Engine& rng) {
  if (sd == 0.0) return mean;
  std::normal_distribution<double> dist(mean, sd);
  return std::max(0.0, dist(rng));
}

Faction pure_faction(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::PureHomophilic: return Faction::Homophilic;
    case ScenarioKind::PureNeophilic: return Faction::Neophilic;
    case ScenarioKind::PureConformic: return Faction::Conformic;
    default: return Faction::Unclassified;
  }
}

}  // namespace

BehaviorParams sample_dominant(const ScenarioSpec& spec, Faction faction, Engine& rng) {
  if (faction == Faction::Unclassified)
    throw std::invalid_argument("dominant sampling needs a behavioral faction");
  // Draw order h, a, c is fixed so a seed maps to the same parameters
  // regardless of which one is boosted.
  auto mean_for = [&](Faction f) {
    return f == faction ? spec.dominant_mean : spec.recessive_mean;
  };
  BehaviorParams p;
  p.homophily = clamped_normal(mean_for(Faction::Homophilic), spec.spread, rng);
  p.novelty = clamped_normal(mean_for(Faction::Neophilic), spec.spread, rng);
  p.conformity = clamped_normal(mean_for(Faction::Conformic), spec.spread, rng);
  return p;
}

BehaviorParams sample_params(const ScenarioSpec& spec, Faction faction, Engine& rng) {
  if (spec.kind == ScenarioKind::Mixed) {
    std::uniform_real_distribution<double> dist(spec.uniform_low, spec.uniform_high);
    BehaviorParams p;
    p.homophily = dist(rng);
    p.novelty = dist(rng);
    p.conformity = dist(rng);
    return p;
  }
  return sample_dominant(spec, faction, rng);
}

Faction classify(const BehaviorParams& p, double tau) {
  const double h = p.homophily, a = p.novelty, c = p.conformity;
  if (h > a && h > c && h > tau) return Faction::Homophilic;
  if (a > h && a > c && a > tau) return Faction::Neophilic;
  if (c > h && c > a && c > tau) return Faction::Conformic;
  return Faction::Unclassified;
}

LabeledNetwork build_network(const ScenarioSpec& spec, Engine& rng) {
  spec.validate();
  const std::size_t n = spec.n;
  LabeledNetwork net{NetworkState(n), std::vector<Faction>(n, Faction::Unclassified)};

  switch (spec.kind) {
    case ScenarioKind::Mixed:
      break;
    case ScenarioKind::Dual: {
      const std::size_t first = n / 2;
      for (std::size_t i = 0; i < n; ++i) net.labels[i] = i < first ? spec.dual[0] : spec.dual[1];
      if (spec.shuffle_dual) std::shuffle(net.labels.begin(), net.labels.end(), rng);
      break;
    }
    default:
      std::fill(net.labels.begin(), net.labels.end(), pure_faction(spec.kind));
  }

  for (std::size_t i = 0; i < n; ++i) net.state.params[i] = sample_params(spec, net.labels[i], rng);

  std::uniform_real_distribution<double> opinion(spec.opinion_low, spec.opinion_high);
  for (auto& x : net.state.opinions) x = opinion(rng);

  std::uniform_real_distribution<double> weight(spec.weight_low, spec.weight_high);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) net.state.weight(i, j) = weight(rng);
  return net;
}

}  // namespace adaptnet
