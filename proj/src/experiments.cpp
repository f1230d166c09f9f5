#include "adaptnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "parallel.hpp"

namespace adaptnet {

void AnalysisOptions::validate() const {
  if (window_step == 0) throw std::invalid_argument("analysis.window_step must be > 0");
  if (steps < window_step)
    throw std::invalid_argument("analysis.steps must be at least analysis.window_step");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw std::invalid_argument("analysis.bin_width must be > 0");
  if (!(log_base >= 2.0) || !std::isfinite(log_base))
    throw std::invalid_argument("analysis.log_base must be >= 2");
  if (!(tau > 0.0)) throw std::invalid_argument("analysis.tau must be > 0");
}

void InterventionOptions::validate(const AnalysisOptions& analysis) const {
  if (transitions.empty()) throw std::invalid_argument("intervention needs at least one transition");
  for (const auto& t : transitions)
    if (t.from == Faction::Unclassified || t.to == Faction::Unclassified)
      throw std::invalid_argument("transitions must name behavioral factions");
  if (t_stars.empty()) throw std::invalid_argument("intervention needs at least one t_star");
  for (auto t : t_stars)
    if (t == 0 || t + effect_gap > analysis.steps)
      throw std::invalid_argument(fmt::format(
          "t_star {} leaves no analysis window at or after t_star + {} within {} steps", t, effect_gap,
          analysis.steps));
  if (focal_nodes == 0) throw std::invalid_argument("focal_nodes must be > 0");
}

std::vector<Faction> analysis_labels(const ScenarioSpec& spec, const std::vector<Faction>& construction,
                                     const NetworkState& initial, double tau) {
  if (spec.kind != ScenarioKind::Mixed) return construction;
  std::vector<Faction> labels(initial.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = classify(initial.params[i], tau);
  return labels;
}

namespace {

struct ReplicateSetup {
  std::uint64_t seed;
  LabeledNetwork network;
  NoiseStream noise;
};

ReplicateSetup setup_replicate(const ScenarioSpec& spec, std::uint64_t master_seed, std::size_t replicate) {
  const auto seed = replicate_seed(master_seed, replicate);
  Engine init = make_engine(purpose_seed(seed, 0, SeedPurpose::Init));
  auto net = build_network(spec, init);
  return {seed, std::move(net), NoiseStream(purpose_seed(seed, 0, SeedPurpose::Noise))};
}

}  // namespace

std::vector<ReplicateRun> simulate_replicates(const ScenarioSpec& spec, const ModelConstants& constants,
                                              const AnalysisOptions& analysis, std::uint64_t master_seed,
                                              std::size_t threads) {
  spec.validate();
  constants.validate();
  analysis.validate();
  std::vector<ReplicateRun> runs(spec.replicate_count);
  detail::parallel_for(runs.size(), threads, [&](std::size_t r) {
    auto setup = setup_replicate(spec, master_seed, r);
    auto& run = runs[r];
    run.replicate = r;
    run.replicate_seed = setup.seed;
    run.labels = analysis_labels(spec, setup.network.labels, setup.network.state, analysis.tau);
    try {
      run.trajectories = run_simulation(setup.network.state, constants, analysis.steps, setup.noise);
    } catch (const NumericalBlowup& e) {
      throw std::runtime_error(fmt::format("replicate {}: {}", r, e.what()));
    }
  });
  return runs;
}

std::vector<ProfileRecord> profile_runs(const std::vector<ReplicateRun>& runs,
                                        const AnalysisOptions& analysis) {
  std::vector<ProfileRecord> out;
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.trajectories.size(); ++i) {
      ProfileRecord rec;
      rec.replicate = run.replicate;
      rec.replicate_seed = run.replicate_seed;
      rec.node = i;
      rec.faction = run.labels[i];
      rec.profile = complexity_profile(run.trajectories[i], analysis.bin_width, analysis.window_step,
                                       analysis.log_base);
      rec.profile.node = i;
      out.push_back(std::move(rec));
    }
  }
  std::sort(out.begin(), out.end(), [](const ProfileRecord& a, const ProfileRecord& b) {
    return std::tie(a.replicate, a.node) < std::tie(b.replicate, b.node);
  });
  return out;
}

std::vector<ProfileRecord> run_scenario_study(const ScenarioSpec& spec, const ModelConstants& constants,
                                              const AnalysisOptions& analysis, std::uint64_t master_seed,
                                              std::size_t threads) {
  return profile_runs(simulate_replicates(spec, constants, analysis, master_seed, threads), analysis);
}

std::map<Faction, std::vector<std::size_t>> select_focal_nodes(const NetworkState& state, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  std::map<Faction, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < state.size(); ++i) out[classify(state.params[i], tau)].push_back(i);
  return out;
}

BehaviorParams reassign_params(Faction target, const ScenarioSpec& sampling, Engine& rng) {
  return sample_dominant(sampling, target, rng);
}

std::vector<std::size_t> eligible_focal_nodes(const ScenarioSpec& spec, const std::vector<Faction>& labels,
                                              const NetworkState& state, Faction from, double tau) {
  std::vector<std::size_t> out;
  if (spec.kind == ScenarioKind::Mixed) {
    auto groups = select_focal_nodes(state, tau);
    if (auto it = groups.find(from); it != groups.end()) out = it->second;
    return out;
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == from) out.push_back(i);
  return out;
}

namespace {

std::uint64_t branch_id(std::uint64_t t_star, const Transition& tr) {
  return derive_seed({t_star, static_cast<std::uint64_t>(faction_code(tr.from)),
                      static_cast<std::uint64_t>(faction_code(tr.to))});
}

std::vector<double> joined(std::span<const double> prefix, std::span<const double> tail) {
  std::vector<double> out;
  out.reserve(prefix.size() + tail.size());
  out.insert(out.end(), prefix.begin(), prefix.end());
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

struct ReplicateOutcome {
  std::vector<InterventionRecord> records;
  std::vector<std::string> warnings;
  SnapshotArchive archive;
  std::uint64_t noise_seed = 0;
};

ReplicateOutcome intervene_replicate(const ScenarioSpec& spec, const ModelConstants& constants,
                                     const AnalysisOptions& analysis, const InterventionOptions& options,
                                     const std::vector<std::uint64_t>& t_stars, std::uint64_t master_seed,
                                     std::size_t replicate) {
  auto setup = setup_replicate(spec, master_seed, replicate);
  const std::size_t n = setup.network.state.size();
  NetworkState state = setup.network.state;

  // Shared history up to the last intervention time.
  Trajectories history(n);
  for (std::size_t i = 0; i < n; ++i) history[i].push_back(state.opinions[i]);
  SnapshotArchive archive;
  for (auto t_star : t_stars) {
    continue_simulation(state, constants, t_star - state.step, setup.noise, history);
    archive.emplace(t_star, state);
  }

  auto profile_of = [&](std::size_t node, std::uint64_t t_star, const Trajectories& tail) {
    const auto traj = joined(std::span<const double>(history[node]).first(t_star + 1), tail[node]);
    auto p = complexity_profile(traj, analysis.bin_width, analysis.window_step, analysis.log_base);
    p.node = node;
    return p;
  };

  ReplicateOutcome out;
  for (const auto& [t_star, snapshot] : archive) {
    const std::uint64_t remaining = analysis.steps - t_star;
    NetworkState baseline = snapshot;
    Trajectories baseline_tail(n);
    continue_simulation(baseline, constants, remaining, setup.noise, baseline_tail);

    for (const auto& tr : options.transitions) {
      const auto eligible = eligible_focal_nodes(spec, setup.network.labels, snapshot, tr.from, analysis.tau);
      if (eligible.empty()) {
        out.warnings.push_back(fmt::format("replicate {}: no {} node eligible for {} at t*={}; skipped",
                                           replicate, to_string(tr.from), tr.label(), t_star));
        continue;
      }
      const auto branch = branch_id(t_star, tr);
      Engine focal_rng = make_engine(purpose_seed(setup.seed, branch, SeedPurpose::Focal));
      std::vector<std::size_t> focal;
      std::sample(eligible.begin(), eligible.end(), std::back_inserter(focal),
                  std::min(options.focal_nodes, eligible.size()), focal_rng);

      for (auto node : focal) {
        InterventionRecord rec;
        rec.transition = tr;
        rec.t_star = t_star;
        rec.replicate = replicate;
        rec.replicate_seed = setup.seed;
        rec.focal_node = node;
        rec.original_params = snapshot.params[node];
        if (options.mode == ReassignMode::Keep) {
          rec.assigned_params = rec.original_params;
        } else {
          Engine rng = make_engine(derive_seed(
              {purpose_seed(setup.seed, branch, SeedPurpose::Reassign), static_cast<std::uint64_t>(node)}));
          rec.assigned_params = reassign_params(tr.to, spec, rng);
        }

        NetworkState intervened = snapshot;
        intervened.params[node] = rec.assigned_params;
        Trajectories tail(n);
        try {
          continue_simulation(intervened, constants, remaining, setup.noise, tail);
        } catch (const NumericalBlowup& e) {
          throw std::runtime_error(fmt::format("replicate {} {}: {}", replicate, tr.label(), e.what()));
        }
        rec.baseline_profile = profile_of(node, t_star, baseline_tail);
        rec.intervention_profile = profile_of(node, t_star, tail);
        rec.delta = intervention_delta(rec.baseline_profile, rec.intervention_profile, t_star,
                                       options.effect_gap);
        out.records.push_back(std::move(rec));
      }
    }
  }
  if (options.keep_snapshots) {
    out.archive = std::move(archive);
    out.noise_seed = setup.noise.seed();
  }
  return out;
}

}  // namespace

InterventionResult run_intervention(const ScenarioSpec& spec, const ModelConstants& constants,
                                    const AnalysisOptions& analysis, const InterventionOptions& options,
                                    std::uint64_t master_seed, std::size_t threads) {
  spec.validate();
  constants.validate();
  analysis.validate();
  options.validate(analysis);

  auto t_stars = options.t_stars;
  std::sort(t_stars.begin(), t_stars.end());
  t_stars.erase(std::unique(t_stars.begin(), t_stars.end()), t_stars.end());

  std::vector<ReplicateOutcome> outcomes(spec.replicate_count);
  detail::parallel_for(outcomes.size(), threads, [&](std::size_t r) {
    try {
      outcomes[r] = intervene_replicate(spec, constants, analysis, options, t_stars, master_seed, r);
    } catch (const NumericalBlowup& e) {
      throw std::runtime_error(fmt::format("replicate {}: {}", r, e.what()));
    }
  });

  InterventionResult result;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    auto& o = outcomes[r];
    std::move(o.records.begin(), o.records.end(), std::back_inserter(result.records));
    std::move(o.warnings.begin(), o.warnings.end(), std::back_inserter(result.warnings));
    if (options.keep_snapshots) {
      result.snapshots.emplace(r, std::move(o.archive));
      result.noise_seeds.emplace(r, o.noise_seed);
    }
  }
  std::sort(result.records.begin(), result.records.end(),
            [](const InterventionRecord& a, const InterventionRecord& b) {
              return std::tie(a.t_star, a.transition, a.replicate, a.focal_node) <
                     std::tie(b.t_star, b.transition, b.replicate, b.focal_node);
            });

  for (auto t_star : t_stars)
    for (const auto& tr : options.transitions) {
      const bool any = std::any_of(result.records.begin(), result.records.end(), [&](const auto& r) {
        return r.t_star == t_star && r.transition == tr;
      });
      if (!any)
        throw std::runtime_error(fmt::format("{} at t*={}: no replicate had an eligible {} focal node",
                                             tr.label(), t_star, to_string(tr.from)));
    }
  return result;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::BinWidth: return "bin_width";
    case SweepAxis::TStar: return "t_star";
    case SweepAxis::Scenario: return "scenario";
  }
  return "scenario";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view s) {
  for (auto a : {SweepAxis::BinWidth, SweepAxis::TStar, SweepAxis::Scenario})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

ScenarioSpec with_scenario_label(ScenarioSpec base, std::string_view label) {
  if (auto kind = parse_scenario_kind(label); kind && *kind != ScenarioKind::Dual) {
    base.kind = *kind;
    return base;
  }
  // dual-X-Y
  if (label.size() == 8 && label.substr(0, 5) == "dual-" && label[6] == '-') {
    auto a = parse_faction(label.substr(5, 1));
    auto b = parse_faction(label.substr(7, 1));
    if (a && b) {
      base.kind = ScenarioKind::Dual;
      base.dual = {*a, *b};
      base.validate();
      return base;
    }
  }
  throw std::invalid_argument(fmt::format("unknown scenario label '{}'", label));
}

namespace {

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  auto v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

}  // namespace

std::vector<SweepEntry> sweep(SweepAxis axis, const std::vector<std::string>& values,
                              const ScenarioSpec& spec, const ModelConstants& constants,
                              const AnalysisOptions& analysis, const InterventionOptions& intervention,
                              std::uint64_t master_seed, std::size_t threads) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<SweepEntry> entries;
  auto tagged = [&](const std::string& value, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("sweep {}={}: {}", to_string(axis), value, e.what()));
    }
  };

  switch (axis) {
    case SweepAxis::BinWidth: {
      const auto runs = simulate_replicates(spec, constants, analysis, master_seed, threads);
      for (const auto& v : values)
        tagged(v, [&] {
          SweepEntry e{v, spec, analysis, {}, {}};
          e.analysis.bin_width = parse_double(v);
          e.analysis.validate();
          e.profiles = profile_runs(runs, e.analysis);
          entries.push_back(std::move(e));
        });
      break;
    }
    case SweepAxis::Scenario:
      for (const auto& v : values)
        tagged(v, [&] {
          SweepEntry e{v, with_scenario_label(spec, v), analysis, {}, {}};
          e.profiles = run_scenario_study(e.spec, constants, analysis, master_seed, threads);
          entries.push_back(std::move(e));
        });
      break;
    case SweepAxis::TStar: {
      // One pass: the archive holds a snapshot for every t*.
      InterventionOptions all = intervention;
      all.t_stars.clear();
      for (const auto& v : values) tagged(v, [&] { all.t_stars.push_back(parse_u64(v)); });
      InterventionResult result;
      tagged(fmt::format("{}", fmt::join(values, ",")), [&] {
        result = run_intervention(spec, constants, analysis, all, master_seed, threads);
      });
      for (std::size_t k = 0; k < values.size(); ++k) {
        SweepEntry e{values[k], spec, analysis, {}, {}};
        for (const auto& r : result.records)
          if (r.t_star == all.t_stars[k]) e.interventions.records.push_back(r);
        e.interventions.warnings = result.warnings;
        entries.push_back(std::move(e));
      }
      break;
    }
  }
  return entries;
}

}  // namespace adaptnet
