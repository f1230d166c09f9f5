#include <doctest.h>

#include <algorithm>
#include <set>

#include "adaptnet/experiments.hpp"

using namespace adaptnet;

namespace {

ScenarioSpec small(ScenarioKind kind, std::size_t n = 30, std::size_t reps = 3) {
  ScenarioSpec s;
  s.kind = kind;
  s.n = n;
  s.replicate_count = reps;
  return s;
}

AnalysisOptions short_run() {
  AnalysisOptions a;
  a.steps = 600;
  a.window_step = 100;
  return a;
}

InterventionOptions one_transition(Faction from, Faction to, std::uint64_t t_star = 200) {
  InterventionOptions o;
  o.transitions = {{from, to}};
  o.t_stars = {t_star};
  o.effect_gap = 100;
  return o;
}

// Mean of (intervention - baseline) over windows ending at or after
// t_star + gap, recomputed without the library helper.
double delta_oracle(const InterventionRecord& r, std::uint64_t gap) {
  double sum = 0;
  int count = 0;
  for (std::size_t k = 0; k < r.baseline_profile.window_ends.size(); ++k) {
    if (r.baseline_profile.window_ends[k] < r.t_star + gap) continue;
    sum += r.intervention_profile.nlz_values[k] - r.baseline_profile.nlz_values[k];
    ++count;
  }
  return sum / count;
}

}  // namespace

TEST_CASE("select_focal_nodes") {
  NetworkState s(4);
  s.params = {{0.30, 0.10, 0.05}, {0.20, 0.24, 0.23}, {0.26, 0.26, 0.05}, {0.05, 0.06, 0.28}};
  auto groups = select_focal_nodes(s, 0.25);
  CHECK(groups[Faction::Homophilic] == std::vector<std::size_t>{0});
  CHECK(groups[Faction::Unclassified] == std::vector<std::size_t>{1, 2});
  CHECK(groups[Faction::Conformic] == std::vector<std::size_t>{3});
  CHECK(groups.count(Faction::Neophilic) == 0);
  CHECK_THROWS_AS(select_focal_nodes(s, 0.0), std::invalid_argument);
}

TEST_CASE("reassign_params") {
  auto spec = small(ScenarioKind::Mixed);
  auto rng = make_engine(4);
  double h = 0, c = 0;
  for (int i = 0; i < 5000; ++i) {
    h += reassign_params(Faction::Homophilic, spec, rng).homophily / 5000;
    c += reassign_params(Faction::Conformic, spec, rng).conformity / 5000;
  }
  CHECK(std::abs(h - 0.25) < 0.005);
  CHECK(std::abs(c - 0.25) < 0.005);
  spec.spread = 0.0;
  CHECK(reassign_params(Faction::Conformic, spec, rng) == BehaviorParams{0.05, 0.05, 0.25});
}

TEST_CASE("run_scenario_study") {
  const auto constants = ModelConstants{};
  SUBCASE("shape, labels and determinism") {
    const auto spec = small(ScenarioKind::PureHomophilic, 20, 2);
    const auto a = run_scenario_study(spec, constants, short_run(), 11);
    REQUIRE(a.size() == 40);
    for (const auto& r : a) {
      CHECK(r.faction == Faction::Homophilic);
      CHECK(r.profile.window_ends.size() == 6);
    }
    CHECK(a == run_scenario_study(spec, constants, short_run(), 11));
    CHECK(a[0].replicate_seed != a[20].replicate_seed);
    CHECK(!(a == run_scenario_study(spec, constants, short_run(), 12)));
  }
  SUBCASE("dual network splits evenly in every replicate") {
    auto spec = small(ScenarioKind::Dual, 30, 2);
    spec.dual = {Faction::Conformic, Faction::Homophilic};
    const auto recs = run_scenario_study(spec, constants, short_run(), 3);
    for (std::size_t rep = 0; rep < 2; ++rep) {
      const auto count = [&](Faction f) {
        return std::count_if(recs.begin(), recs.end(), [&](const auto& r) { return r.replicate == rep && r.faction == f; });
      };
      CHECK(count(Faction::Conformic) == 15);
      CHECK(count(Faction::Homophilic) == 15);
    }
  }
  SUBCASE("thread count does not change results") {
    const auto spec = small(ScenarioKind::Mixed, 20, 4);
    CHECK(run_scenario_study(spec, constants, short_run(), 5, 1) ==
          run_scenario_study(spec, constants, short_run(), 5, 3));
  }
}

TEST_CASE("intervention records") {
  const auto spec = small(ScenarioKind::PureNeophilic, 25, 3);
  const ModelConstants constants;
  const auto analysis = short_run();
  auto options = one_transition(Faction::Neophilic, Faction::Homophilic);
  options.focal_nodes = 2;
  options.keep_snapshots = true;
  const auto result = run_intervention(spec, constants, analysis, options, 21);

  REQUIRE(result.records.size() == 6);
  for (const auto& r : result.records) {
    CHECK(r.transition.label() == "A->H");
    CHECK(r.delta == delta_oracle(r, 100));
    CHECK(r.delta == intervention_delta(r.baseline_profile, r.intervention_profile, 200, 100));
    CHECK(r.assigned_params.homophily > r.assigned_params.novelty);
    // Windows ending at or before t* see the shared history only.
    for (std::size_t k = 0; k < r.baseline_profile.window_ends.size(); ++k)
      if (r.baseline_profile.window_ends[k] <= 200)
        CHECK(r.baseline_profile.nlz_values[k] == r.intervention_profile.nlz_values[k]);
  }
  CHECK(std::is_sorted(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.replicate, a.focal_node) < std::tie(b.replicate, b.focal_node);
  }));

  SUBCASE("baseline continuation reproduces the uninterrupted run") {
    const auto runs = simulate_replicates(spec, constants, analysis, 21);
    for (std::size_t rep = 0; rep < 3; ++rep) {
      const auto& snap = result.snapshots.at(rep).at(200);
      CHECK(snap.step == 200);
      const auto tail = run_simulation(snap, constants, 400, NoiseStream(result.noise_seeds.at(rep)));
      for (std::size_t i = 0; i < 25; ++i) {
        const std::vector<double> expected(runs[rep].trajectories[i].begin() + 200, runs[rep].trajectories[i].end());
        REQUIRE(tail[i] == expected);
      }
    }
    for (const auto& r : result.records) {
      const auto& traj = runs[r.replicate].trajectories[r.focal_node];
      CHECK(r.baseline_profile.nlz_values == complexity_profile(traj, 0.75, 100).nlz_values);
      CHECK(r.baseline_profile.node == r.focal_node);
    }
  }

  SUBCASE("branches differ only through the focal node at the first step") {
    const auto& r = result.records.front();
    const auto& snap = result.snapshots.at(r.replicate).at(200);
    const NoiseStream noise(result.noise_seeds.at(r.replicate));
    auto changed = snap;
    changed.params[r.focal_node] = r.assigned_params;
    const auto a = euler_step(snap, constants, noise);
    const auto b = euler_step(changed, constants, noise);
    const std::size_t f = r.focal_node;
    for (std::size_t i = 0; i < 25; ++i) {
      if (i != f) {
        CHECK(a.opinions[i] == b.opinions[i]);
        for (std::size_t j = 0; j < 25; ++j) CHECK(a.weight(i, j) == b.weight(i, j));
      }
    }
    CHECK(a.weights != b.weights);
  }
}

TEST_CASE("null intervention gives exactly zero delta") {
  const auto spec = small(ScenarioKind::Mixed, 40, 4);
  auto options = one_transition(Faction::Homophilic, Faction::Homophilic);
  options.transitions.push_back({Faction::Conformic, Faction::Neophilic});
  options.mode = ReassignMode::Keep;
  const auto result = run_intervention(spec, ModelConstants{}, short_run(), options, 8);
  REQUIRE(!result.records.empty());
  for (const auto& r : result.records) {
    CHECK(r.delta == 0.0);
    CHECK(r.baseline_profile == r.intervention_profile);
    CHECK(r.assigned_params == r.original_params);
  }
}

TEST_CASE("mixed focal nodes satisfy the dominance rule") {
  const auto spec = small(ScenarioKind::Mixed, 40, 3);
  auto options = one_transition(Faction::Conformic, Faction::Homophilic);
  options.focal_nodes = 3;
  const auto result = run_intervention(spec, ModelConstants{}, short_run(), options, 17);
  for (const auto& r : result.records) CHECK(classify(r.original_params, 0.25) == Faction::Conformic);
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (const auto& r : result.records) unique.insert({r.replicate, r.focal_node});
  CHECK(unique.size() == result.records.size());
}

TEST_CASE("missing focal faction") {
  auto spec = small(ScenarioKind::PureHomophilic, 10, 2);
  const auto options = one_transition(Faction::Conformic, Faction::Homophilic);
  CHECK_THROWS_AS(run_intervention(spec, ModelConstants{}, short_run(), options, 1), std::runtime_error);

  // Moving a present faction to an absent one is fine.
  spec.kind = ScenarioKind::Dual;
  spec.dual = {Faction::Homophilic, Faction::Neophilic};
  auto both = one_transition(Faction::Homophilic, Faction::Conformic);
  CHECK_NOTHROW(run_intervention(spec, ModelConstants{}, short_run(), both, 1));
}

TEST_CASE("intervention option validation") {
  auto options = one_transition(Faction::Homophilic, Faction::Neophilic, 550);
  CHECK_THROWS_AS(options.validate(short_run()), std::invalid_argument);
  options.t_stars = {500};
  CHECK_NOTHROW(options.validate(short_run()));
  options.focal_nodes = 0;
  CHECK_THROWS_AS(options.validate(short_run()), std::invalid_argument);
}

TEST_CASE("sweeps") {
  const auto spec = small(ScenarioKind::Mixed, 20, 2);
  const ModelConstants constants;
  const auto analysis = short_run();

  SUBCASE("bin width re-binning equals re-simulation") {
    const auto entries = sweep(SweepAxis::BinWidth, {"0.5", "0.75", "1.0"}, spec, constants, analysis, {}, 4);
    REQUIRE(entries.size() == 3);
    for (const auto& e : entries) {
      auto direct = analysis;
      direct.bin_width = std::stod(e.value);
      CHECK(e.profiles == run_scenario_study(spec, constants, direct, 4));
    }
    CHECK(!(entries[0].profiles == entries[2].profiles));
  }
  SUBCASE("singleton sweep equals a direct study") {
    const auto entries = sweep(SweepAxis::Scenario, {"mixed"}, spec, constants, analysis, {}, 4);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].profiles == run_scenario_study(spec, constants, analysis, 4));
  }
  SUBCASE("scenario labels") {
    const auto entries = sweep(SweepAxis::Scenario, {"pure-conformic", "dual-A-C"}, spec, constants, analysis, {}, 4);
    CHECK(entries[0].spec.kind == ScenarioKind::PureConformic);
    CHECK(entries[1].spec.kind == ScenarioKind::Dual);
    CHECK(entries[1].spec.dual == std::array<Faction, 2>{Faction::Neophilic, Faction::Conformic});
    CHECK_THROWS_WITH_AS(sweep(SweepAxis::Scenario, {"scenario-9"}, spec, constants, analysis, {}, 4),
                         doctest::Contains("scenario=scenario-9"), std::runtime_error);
  }
  SUBCASE("t_star sweep matches separate intervention runs") {
    auto base = one_transition(Faction::Homophilic, Faction::Neophilic);
    const auto entries = sweep(SweepAxis::TStar, {"200", "300", "400"}, spec, constants, analysis, base, 6);
    REQUIRE(entries.size() == 3);
    for (const auto& e : entries) {
      auto single = base;
      single.t_stars = {std::stoull(e.value)};
      const auto direct = run_intervention(spec, constants, analysis, single, 6);
      REQUIRE(e.interventions.records.size() == direct.records.size());
      for (std::size_t k = 0; k < direct.records.size(); ++k) {
        CHECK(e.interventions.records[k].delta == direct.records[k].delta);
        CHECK(e.interventions.records[k].focal_node == direct.records[k].focal_node);
      }
    }
  }
  SUBCASE("bad values are tagged") {
    CHECK_THROWS_WITH_AS(sweep(SweepAxis::BinWidth, {"0"}, spec, constants, analysis, {}, 4),
                         doctest::Contains("bin_width=0"), std::runtime_error);
    CHECK_THROWS_AS(sweep(SweepAxis::BinWidth, {}, spec, constants, analysis, {}, 4), std::invalid_argument);
  }
}
