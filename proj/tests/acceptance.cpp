// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runs at full model size; expect tens of minutes on one
// core (set ADAPTNET_THREADS to use more).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "adaptnet/complexity.hpp"
#include "adaptnet/config.hpp"
#include "adaptnet/experiments.hpp"
#include "adaptnet/io.hpp"
#include "adaptnet/stats.hpp"

using namespace adaptnet;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::cout << fmt::format("{} {} ({:.1f}s): {}", o.pass ? "PASS" : "FAIL", name, secs, o.detail) << std::endl;
}

std::size_t threads() {
  if (const char* env = std::getenv("ADAPTNET_THREADS")) return std::max(1, std::atoi(env));
  return 1;
}

constexpr std::uint64_t kSeed = 20240601;

ScenarioSpec pure(ScenarioKind kind) {
  ScenarioSpec s;
  s.kind = kind;
  return s;
}

// Grand mean over replicates of the per-replicate faction means.
std::vector<double> grand_mean(const ReplicateMeans& m, Faction f) {
  std::vector<double> out;
  int count = 0;
  for (const auto& g : m.groups) {
    if (g.faction != f) continue;
    if (out.empty()) out.assign(g.mean.size(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += g.mean[k];
    ++count;
  }
  for (auto& v : out) v /= count;
  return out;
}

std::size_t window_index(const std::vector<std::uint64_t>& ends, std::uint64_t end) {
  return static_cast<std::size_t>(std::find(ends.begin(), ends.end(), end) - ends.begin());
}

std::string join(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(fmt::format("{:.4f}", x));
  return fmt::format("[{}]", fmt::join(parts, " "));
}

}  // namespace

int main() {
  const ModelConstants constants;
  const AnalysisOptions analysis;

  criterion("LZ76 oracle", [] {
    std::vector<std::int64_t> s;
    for (char c : std::string("01100101101100100110")) s.push_back(c - '0');
    const auto starts = lz76_components(s);
    const std::vector<std::size_t> expected{0, 1, 2, 4, 7, 11, 17};
    return Outcome{lz76(s) == 7 && starts == expected,
                   fmt::format("LZ={} boundaries {}", lz76(s), fmt::join(starts, ","))};
  });

  criterion("normalization asymptotics", [] {
    std::mt19937_64 rng(kSeed);
    std::bernoulli_distribution bit(0.5);
    double sum = 0;
    for (int k = 0; k < 100; ++k) {
      std::vector<std::int64_t> s(10000);
      for (auto& v : s) v = bit(rng);
      sum += normalized_lz(s);
    }
    const double mean = sum / 100;
    return Outcome{mean >= 0.8 && mean <= 1.2, fmt::format("mean nLZ {:.4f} over 100 sequences of 10^4", mean)};
  });

  // Shared full-size runs for the qualitative checks below.
  std::map<Faction, std::vector<ReplicateRun>> pure_runs;

  criterion("weight non-negativity and determinism", [&] {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t violations = 0, cases = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t n = 2 + trial % 30;
      NetworkState s(n);
      for (auto& x : s.opinions) x = 4.0 * u(rng) - 2.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s.weight(i, j) = i == j ? 0.0 : u(rng);
      for (auto& p : s.params) p = {2.0 * u(rng), 2.0 * u(rng), 2.0 * u(rng)};
      ModelConstants k;
      k.theta_h = u(rng);
      k.theta_a = u(rng);
      k.noise_sigma = 3.0 * u(rng);
      const auto next = euler_step(s, k, NoiseStream(rng()));
      violations += static_cast<std::size_t>(
          std::count_if(next.weights.begin(), next.weights.end(), [](double w) { return !(w >= 0.0); }));
      ++cases;
    }
    auto spec = pure(ScenarioKind::Mixed);
    spec.replicate_count = 1;
    const auto a = run_scenario_study(spec, constants, analysis, kSeed, threads());
    const auto b = run_scenario_study(spec, constants, analysis, kSeed, threads());
    std::ostringstream ca, cb;
    write_profiles_csv(ca, a, {kSeed, "x"});
    write_profiles_csv(cb, b, {kSeed, "x"});
    const auto ra = simulate_replicates(spec, constants, analysis, kSeed, threads());
    const auto rb = simulate_replicates(spec, constants, analysis, kSeed, threads());
    const bool identical = ca.str() == cb.str() && ra[0].trajectories == rb[0].trajectories;
    return Outcome{violations == 0 && identical,
                   fmt::format("{} random steps, {} negative weights; same-seed runs identical: {}", cases,
                               violations, identical)};
  });

  criterion("snapshot continuation equivalence", [&] {
    auto spec = pure(ScenarioKind::Mixed);
    spec.replicate_count = 1;
    const auto full = simulate_replicates(spec, constants, analysis, kSeed, threads());

    // Rebuild replicate 0, stop at t* = 600, persist, reload and resume.
    const auto rep_seed = replicate_seed(kSeed, 0);
    Engine init = make_engine(purpose_seed(rep_seed, 0, SeedPurpose::Init));
    auto state = build_network(spec, init).state;
    const NoiseStream noise(purpose_seed(rep_seed, 0, SeedPurpose::Noise));
    Trajectories head(state.size());
    continue_simulation(state, constants, 600, noise, head);
    const auto restored = decode_snapshot(encode_snapshot({state, noise.seed()}));
    const auto tail = run_simulation(restored.state, constants, 2400, NoiseStream(restored.noise_seed));

    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < state.size(); ++i)
      for (std::size_t k = 0; k <= 2400; ++k)
        mismatches += tail[i][k] != full[0].trajectories[i][600 + k];
    return Outcome{mismatches == 0 && restored.state == state,
                   fmt::format("{} of {} resumed samples differ from the uninterrupted run", mismatches,
                               state.size() * 2401)};
  });

  criterion("qualitative faction signatures", [&] {
    for (auto [kind, faction] : {std::pair{ScenarioKind::PureHomophilic, Faction::Homophilic},
                                 std::pair{ScenarioKind::PureNeophilic, Faction::Neophilic},
                                 std::pair{ScenarioKind::PureConformic, Faction::Conformic}})
      pure_runs[faction] = simulate_replicates(pure(kind), constants, analysis, kSeed, threads());

    auto means_of = [&](Faction f, const AnalysisOptions& a) { return replicate_means(profile_runs(pure_runs[f], a)); };
    const auto h = means_of(Faction::Homophilic, analysis);
    const auto ends = h.groups.front().window_ends;
    const auto i600 = window_index(ends, 600), i3000 = window_index(ends, 3000);

    int rising = 0;
    for (const auto& g : h.groups) rising += g.mean[i3000] > g.mean[i600];
    const auto hm = grand_mean(h, Faction::Homophilic);
    const double h_increase = hm[i3000] - hm[i600];

    const auto am = grand_mean(means_of(Faction::Neophilic, analysis), Faction::Neophilic);
    const auto [lo, hi] = std::minmax_element(am.begin() + static_cast<long>(i600), am.end());
    const double a_range = *hi - *lo;

    const auto cm = grand_mean(means_of(Faction::Conformic, analysis), Faction::Conformic);
    const bool early_non_increasing = cm[1] <= cm[0];
    const double c_min = *std::min_element(cm.begin(), cm.end());
    const bool late_recovery = cm.back() > c_min;

    const bool ok = rising >= 9 && a_range < h_increase && early_non_increasing && late_recovery;
    return Outcome{ok, fmt::format("(i) homophilic rises 600->3000 in {}/10 replicates; (ii) neophilic range {:.4f} "
                                   "vs homophilic increase {:.4f}; (iii) conformic {} min {:.4f} | H {} A {}",
                                   rising, a_range, h_increase, join(cm), c_min, join(hm), join(am))};
  });

  criterion("bin-sensitivity ordering", [&] {
    if (pure_runs.size() != 3) return Outcome{false, "pure-scenario runs unavailable"};
    std::vector<std::string> orders;
    std::vector<std::string> values;
    for (double width : {0.5, 0.75, 1.0}) {
      auto a = analysis;
      a.bin_width = width;
      std::vector<std::pair<double, char>> at_end;
      for (auto f : kBehavioralFactions) {
        const auto m = grand_mean(replicate_means(profile_runs(pure_runs[f], a)), f);
        at_end.push_back({m.back(), faction_code(f)});
      }
      std::sort(at_end.begin(), at_end.end());
      std::string order;
      for (auto& [v, code] : at_end) order += code;
      orders.push_back(order);
      values.push_back(fmt::format("D={}: {}={:.4f} {}={:.4f} {}={:.4f}", width, at_end[0].second, at_end[0].first,
                                   at_end[1].second, at_end[1].first, at_end[2].second, at_end[2].first));
    }
    const bool same = std::all_of(orders.begin(), orders.end(), [&](const auto& o) { return o == orders[0]; });
    return Outcome{same, fmt::format("ascending order at t=3000 {}; {}", fmt::join(orders, "/"), fmt::join(values, "; "))};
  });
  pure_runs.clear();

  criterion("intervention signs", [&] {
    // Mixed networks, t* = 600, every transition; five focal nodes per
    // replicate, each its own baseline/intervention pair, averaged into one
    // delta per run.
    auto spec = pure(ScenarioKind::Mixed);
    spec.replicate_count = 20;
    InterventionOptions options;
    options.transitions = all_transitions();
    options.t_stars = {600};
    options.focal_nodes = 5;
    const auto result = run_intervention(spec, constants, analysis, options, kSeed, threads());

    std::map<std::string, EffectSummary> by_label;
    for (const auto& tr : options.transitions) {
      std::vector<InterventionRecord> group;
      for (const auto& r : result.records)
        if (r.transition == tr) group.push_back(r);
      by_label[tr.label()] = summarize_effect(group);
    }
    const std::map<std::string, double> published{{"A->C", -0.00172}, {"A->H", 0.02435}, {"C->H", 0.02327},
                                              {"C->A", 0.00332},  {"H->C", -0.01311}, {"H->A", -0.01251}};
    std::vector<std::string> rows;
    for (const auto& [label, s] : by_label) {
      const double rel = std::abs(s.delta_mean - published.at(label)) / std::abs(published.at(label));
      rows.push_back(fmt::format("{} delta={:+.5f}+-{:.5f} p={:.2g} d={:+.2f} n={} (published {:+.5f}, {} 50%)", label,
                                 s.delta_mean, s.ci_half_width, s.p_value, s.cohens_d, s.runs, published.at(label),
                                 rel <= 0.5 ? "within" : "outside"));
    }
    const auto& ah = by_label.at("A->H");
    const auto& hc = by_label.at("H->C");
    const auto& ha = by_label.at("H->A");
    const auto& ac = by_label.at("A->C");
    const auto& ca = by_label.at("C->A");
    const bool ok = ah.delta_mean > 0 && ah.p_value < 0.01 && ah.cohens_d > 1 && hc.delta_mean < 0 &&
                    hc.p_value < 0.01 && ha.delta_mean < 0 && ha.p_value < 0.01 && ac.p_value >= 0.01 &&
                    ca.p_value >= 0.01;
    return Outcome{ok, fmt::format("{}", fmt::join(rows, "; "))};
  });

  criterion("statistics oracles", [] {
    const std::vector<double> v{0.5, 0.7, 0.9};
    const auto t = one_sample_t(v);
    const double d = cohens_d(v);
    std::mt19937_64 rng(kSeed);
    std::normal_distribution<double> g(0.6, 0.05);
    const std::vector<std::uint64_t> ends{3000};
    const int trials = 1000;
    int covered = 0;
    for (int k = 0; k < trials; ++k) {
      std::vector<std::vector<double>> reps(100, std::vector<double>(1));
      for (auto& r : reps) r[0] = g(rng);
      const auto band = bootstrap_band(reps, ends, {1000, 0.95}, derive_seed({kSeed, static_cast<std::uint64_t>(k)}));
      covered += band.ci_low[0] <= 0.6 && 0.6 <= band.ci_high[0];
    }
    const double coverage = static_cast<double>(covered) / trials;
    const bool ok = std::abs(t.t_statistic - 6.062) <= 1e-3 && std::abs(t.p_value - 0.0262) <= 1e-3 &&
                    std::abs(d - 3.5) <= 1e-12 && std::abs(coverage - 0.95) <= 0.03;
    return Outcome{ok, fmt::format("t={:.5f} p={:.5f} d={:.15g} bootstrap coverage {:.3f}", t.t_statistic, t.p_value,
                                   d, coverage)};
  });

  criterion("null intervention", [&] {
    auto spec = pure(ScenarioKind::Mixed);
    spec.replicate_count = 10;
    InterventionOptions options;
    options.transitions = all_transitions();
    options.t_stars = {600};
    options.mode = ReassignMode::Keep;
    const auto result = run_intervention(spec, constants, analysis, options, kSeed + 1, threads());
    const auto nonzero = std::count_if(result.records.begin(), result.records.end(),
                                       [](const InterventionRecord& r) { return r.delta != 0.0; });
    return Outcome{nonzero == 0 && !result.records.empty(),
                   fmt::format("{} of {} runs with nonzero delta", nonzero, result.records.size())};
  });

  std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
