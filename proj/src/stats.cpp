#include "adaptnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "adaptnet/seeding.hpp"

namespace adaptnet {

ReplicateMeans replicate_means(std::span<const ProfileRecord> records,
                               std::span<const Faction> requested) {
  std::map<std::pair<Faction, std::size_t>, ReplicateMean> groups;
  std::vector<std::size_t> replicates;
  for (const auto& r : records) {
    replicates.push_back(r.replicate);
    auto [it, inserted] = groups.try_emplace({r.faction, r.replicate});
    auto& g = it->second;
    if (inserted) {
      g.replicate = r.replicate;
      g.faction = r.faction;
      g.window_ends = r.profile.window_ends;
      g.mean.assign(r.profile.nlz_values.size(), 0.0);
    } else if (g.window_ends != r.profile.window_ends) {
      throw std::invalid_argument(fmt::format(
          "replicate {} node {}: window ends differ from the rest of its faction", r.replicate, r.node));
    }
    for (std::size_t k = 0; k < g.mean.size(); ++k) g.mean[k] += r.profile.nlz_values[k];
    ++g.node_count;
  }

  ReplicateMeans out;
  for (auto& [key, g] : groups) {
    for (auto& v : g.mean) v /= static_cast<double>(g.node_count);
    out.groups.push_back(std::move(g));
  }

  std::sort(replicates.begin(), replicates.end());
  replicates.erase(std::unique(replicates.begin(), replicates.end()), replicates.end());
  for (auto f : requested)
    for (auto rep : replicates)
      if (!groups.contains({f, rep}))
        out.warnings.push_back(
            fmt::format("replicate {} has no {} nodes; omitted from the faction mean", rep, to_string(f)));
  return out;
}

namespace {

// Linear interpolation between closest ranks (Hyndman & Fan type 7).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct Moments {
  double mean;
  double sd;
};

Moments sample_moments(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("need at least two values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw std::invalid_argument("degenerate sample: zero variance");
  return {mean, sd};
}

}  // namespace

TrajectoryBand bootstrap_band(std::span<const std::vector<double>> trajectories,
                              std::span<const std::uint64_t> window_ends,
                              const BootstrapOptions& options, std::uint64_t seed) {
  const std::size_t reps = trajectories.size();
  if (reps < 2) throw std::invalid_argument("bootstrap needs at least two replicate trajectories");
  if (options.resamples < 1000) throw std::invalid_argument("bootstrap needs at least 1000 resamples");
  if (!(options.confidence > 0.0 && options.confidence < 1.0))
    throw std::invalid_argument("confidence must lie in (0, 1)");
  const std::size_t windows = window_ends.size();
  for (const auto& t : trajectories)
    if (t.size() != windows) throw std::invalid_argument("trajectory length does not match window grid");

  TrajectoryBand band;
  band.window_ends.assign(window_ends.begin(), window_ends.end());
  band.replicate_count = reps;
  band.mean.assign(windows, 0.0);
  for (const auto& t : trajectories)
    for (std::size_t k = 0; k < windows; ++k) band.mean[k] += t[k];
  for (auto& m : band.mean) m /= static_cast<double>(reps);

  // resampled[k][b] = mean of window k in resample b
  std::vector<std::vector<double>> resampled(windows, std::vector<double>(options.resamples));
  std::vector<double> acc(windows);
  for (std::size_t b = 0; b < options.resamples; ++b) {
    Engine eng = make_engine(derive_seed({seed, b}));
    std::uniform_int_distribution<std::size_t> pick(0, reps - 1);
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& t = trajectories[pick(eng)];
      for (std::size_t k = 0; k < windows; ++k) acc[k] += t[k];
    }
    for (std::size_t k = 0; k < windows; ++k) resampled[k][b] = acc[k] / static_cast<double>(reps);
  }

  const double alpha = (1.0 - options.confidence) / 2.0;
  band.ci_low.resize(windows);
  band.ci_high.resize(windows);
  for (std::size_t k = 0; k < windows; ++k) {
    auto& v = resampled[k];
    std::sort(v.begin(), v.end());
    // Percentile bounds of a small skewed sample can miss the sample mean;
    // bands always contain it.
    band.ci_low[k] = std::min(quantile_sorted(v, alpha), band.mean[k]);
    band.ci_high[k] = std::max(quantile_sorted(v, 1.0 - alpha), band.mean[k]);
  }
  return band;
}

std::vector<TrajectoryBand> faction_bands(const ReplicateMeans& means, const BootstrapOptions& options,
                                          std::uint64_t master_seed,
                                          std::vector<std::string>* warnings) {
  std::map<Faction, std::vector<const ReplicateMean*>> by_faction;
  for (const auto& g : means.groups) by_faction[g.faction].push_back(&g);

  std::vector<TrajectoryBand> bands;
  for (const auto& [faction, groups] : by_faction) {
    if (groups.size() < 2) {
      if (warnings)
        warnings->push_back(fmt::format("{} has {} replicate(s); no confidence band", to_string(faction),
                                        groups.size()));
      continue;
    }
    std::vector<std::vector<double>> trajectories;
    for (const auto* g : groups) trajectories.push_back(g->mean);
    const auto seed = derive_seed({master_seed, static_cast<std::uint64_t>(SeedPurpose::Bootstrap),
                                   static_cast<std::uint64_t>(faction_code(faction))});
    auto band = bootstrap_band(trajectories, groups.front()->window_ends, options, seed);
    band.faction = faction;
    bands.push_back(std::move(band));
  }
  return bands;
}

TTestResult one_sample_t(std::span<const double> values) {
  const auto [mean, sd] = sample_moments(values);
  const double n = static_cast<double>(values.size());
  TTestResult out;
  out.degrees_of_freedom = values.size() - 1;
  out.t_statistic = mean / (sd / std::sqrt(n));
  boost::math::students_t dist(static_cast<double>(out.degrees_of_freedom));
  out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(out.t_statistic)));
  out.p_value = std::min(out.p_value, 1.0);
  return out;
}

double cohens_d(std::span<const double> values) {
  const auto [mean, sd] = sample_moments(values);
  return mean / sd;
}

std::string significance_stars(double p) {
  std::string stars;
  for (int decade = 2; decade <= 400 && p < std::pow(10.0, -decade); ++decade) stars += '*';
  return stars;
}

EffectSummary summarize_effect(std::span<const InterventionRecord> records, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  if (records.empty()) throw std::invalid_argument("effect summary needs at least two runs");
  EffectSummary s;
  s.transition = records.front().transition;
  s.t_star = records.front().t_star;
  // A run is one replicate; several focal nodes in a replicate are averaged.
  std::map<std::size_t, std::pair<double, std::size_t>> per_run;
  for (const auto& r : records) {
    if (r.transition != s.transition || r.t_star != s.t_star)
      throw std::invalid_argument("effect summary mixes transitions or intervention times");
    auto& [sum, count] = per_run[r.replicate];
    sum += r.delta;
    ++count;
  }
  if (per_run.size() < 2) throw std::invalid_argument("effect summary needs at least two runs");
  std::vector<double> deltas;
  deltas.reserve(per_run.size());
  for (const auto& [rep, acc] : per_run) deltas.push_back(acc.first / static_cast<double>(acc.second));
  s.runs = deltas.size();
  const auto [mean, sd] = sample_moments(deltas);
  const auto test = one_sample_t(deltas);
  boost::math::students_t dist(static_cast<double>(test.degrees_of_freedom));
  const double crit = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  s.delta_mean = mean;
  s.ci_half_width = crit * sd / std::sqrt(static_cast<double>(deltas.size()));
  s.t_statistic = test.t_statistic;
  s.p_value = test.p_value;
  s.cohens_d = mean / sd;
  s.stars = significance_stars(s.p_value);
  return s;
}

}  // namespace adaptnet
