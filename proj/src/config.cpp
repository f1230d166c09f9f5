#include "adaptnet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "adaptnet/seeding.hpp"

namespace adaptnet {

using nlohmann::json;

std::string_view to_string(ExperimentType t) {
  switch (t) {
    case ExperimentType::Study: return "study";
    case ExperimentType::Intervention: return "intervention";
    case ExperimentType::Sweep: return "sweep";
  }
  return "study";
}

std::vector<Transition> all_transitions() {
  std::vector<Transition> out;
  for (auto from : kBehavioralFactions)
    for (auto to : kBehavioralFactions)
      if (from != to) out.push_back({from, to});
  return out;
}

Transition parse_transition(std::string_view s) {
  const auto arrow = s.find("->");
  if (arrow == std::string_view::npos)
    throw std::invalid_argument(fmt::format("transition '{}' is not of the form FROM->TO", s));
  auto from = parse_faction(s.substr(0, arrow));
  auto to = parse_faction(s.substr(arrow + 2));
  if (!from || !to || *from == Faction::Unclassified || *to == Faction::Unclassified)
    throw std::invalid_argument(fmt::format("transition '{}' names an unknown faction", s));
  return {*from, *to};
}

namespace {

// Walks one JSON object, handing out fields by name and rejecting any key
// that was never asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(fmt::format("{}: expected an object", display()));
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) out = convert<T>(*it, field(key));
  }

  template <class T>
  T require(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) throw ConfigError(fmt::format("{}: required field is missing", field(key)));
    return convert<T>(*it, field(key));
  }

  bool has(const char* key) const { return j_.contains(key); }

  Section child(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    auto it = j_.find(key);
    return Section(it == j_.end() ? empty : *it, field(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.contains(it.key())) throw ConfigError(fmt::format("{}: unknown key", field(it.key())));
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string display() const { return path_.empty() ? std::string("config") : path_; }

  template <class T>
  static T convert(const json& v, const std::string& name) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(fmt::format("{}: expected true or false", name));
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_unsigned())
        throw ConfigError(fmt::format("{}: expected a non-negative integer", name));
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(fmt::format("{}: expected a number", name));
      return v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(fmt::format("{}: expected a string", name));
      return v.get<std::string>();
    } else {
      if (!v.is_array()) throw ConfigError(fmt::format("{}: expected an array", name));
      return v;
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

template <class Fn>
void checked(Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  Section root(j, "");
  c.master_seed = root.require<std::uint64_t>("seed");
  root.get("output_dir", c.output_dir);
  root.get("threads", c.threads);

  {
    auto s = root.child("scenario");
    const auto kind = s.require<std::string>("kind");
    auto parsed = parse_scenario_kind(kind);
    if (!parsed) throw ConfigError(fmt::format("scenario.kind: unknown scenario '{}'", kind));
    c.scenario.kind = *parsed;
    if (s.has("factions")) {
      const auto list = s.require<json>("factions");
      if (list.size() != 2) throw ConfigError("scenario.factions: expected exactly two factions");
      for (std::size_t k = 0; k < 2; ++k) {
        auto f = list[k].is_string() ? parse_faction(list[k].get<std::string>()) : std::nullopt;
        if (!f) throw ConfigError(fmt::format("scenario.factions[{}]: unknown faction", k));
        c.scenario.dual[k] = *f;
      }
    } else if (c.scenario.kind == ScenarioKind::Dual) {
      throw ConfigError("scenario.factions: required for dual scenarios");
    }
    s.get("n", c.scenario.n);
    s.get("replicates", c.scenario.replicate_count);
    s.get("dominant_mean", c.scenario.dominant_mean);
    s.get("recessive_mean", c.scenario.recessive_mean);
    s.get("spread", c.scenario.spread);
    s.get("uniform_low", c.scenario.uniform_low);
    s.get("uniform_high", c.scenario.uniform_high);
    s.get("opinion_low", c.scenario.opinion_low);
    s.get("opinion_high", c.scenario.opinion_high);
    s.get("weight_low", c.scenario.weight_low);
    s.get("weight_high", c.scenario.weight_high);
    s.get("shuffle_dual", c.scenario.shuffle_dual);
    s.finish();
  }
  {
    auto s = root.child("model");
    s.get("theta_h", c.constants.theta_h);
    s.get("theta_a", c.constants.theta_a);
    s.get("dt", c.constants.dt);
    s.get("noise_sigma", c.constants.noise_sigma);
    s.finish();
  }
  {
    auto s = root.child("analysis");
    s.get("steps", c.analysis.steps);
    s.get("window_step", c.analysis.window_step);
    s.get("bin_width", c.analysis.bin_width);
    s.get("log_base", c.analysis.log_base);
    s.get("tau", c.analysis.tau);
    s.get("bootstrap_resamples", c.bootstrap.resamples);
    s.get("confidence", c.bootstrap.confidence);
    s.finish();
  }
  {
    auto s = root.child("experiment");
    std::string type = "study";
    s.get("type", type);
    if (type == "study") c.experiment = ExperimentType::Study;
    else if (type == "intervention") c.experiment = ExperimentType::Intervention;
    else if (type == "sweep") c.experiment = ExperimentType::Sweep;
    else throw ConfigError(fmt::format("experiment.type: unknown experiment '{}'", type));

    c.intervention.transitions = all_transitions();
    if (s.has("transitions")) {
      c.intervention.transitions.clear();
      for (const auto& t : s.require<json>("transitions")) {
        if (!t.is_string()) throw ConfigError("experiment.transitions: expected strings like \"A->H\"");
        checked([&] { c.intervention.transitions.push_back(parse_transition(t.get<std::string>())); });
      }
    }
    if (s.has("t_star")) {
      c.intervention.t_stars.clear();
      for (const auto& t : s.require<json>("t_star")) {
        if (!t.is_number_unsigned()) throw ConfigError("experiment.t_star: expected non-negative integers");
        c.intervention.t_stars.push_back(t.get<std::uint64_t>());
      }
    }
    s.get("focal_nodes", c.intervention.focal_nodes);
    s.get("effect_gap", c.intervention.effect_gap);
    bool null_intervention = false;
    s.get("null_intervention", null_intervention);
    c.intervention.mode = null_intervention ? ReassignMode::Keep : ReassignMode::Resample;

    if (s.has("sweep")) {
      auto sw = s.child("sweep");
      const auto axis = sw.require<std::string>("axis");
      auto parsed_axis = parse_sweep_axis(axis);
      if (!parsed_axis) throw ConfigError(fmt::format("experiment.sweep.axis: unknown axis '{}'", axis));
      c.sweep_axis = *parsed_axis;
      for (const auto& v : sw.require<json>("values")) {
        if (v.is_string()) c.sweep_values.push_back(v.get<std::string>());
        else if (v.is_number()) c.sweep_values.push_back(v.dump());
        else throw ConfigError("experiment.sweep.values: expected numbers or strings");
      }
      if (c.sweep_values.empty()) throw ConfigError("experiment.sweep.values: must not be empty");
      sw.finish();
    } else if (c.experiment == ExperimentType::Sweep) {
      throw ConfigError("experiment.sweep: required when experiment.type is sweep");
    }
    s.finish();
  }
  root.finish();

  checked([&] { c.scenario.validate(); });
  checked([&] { c.constants.validate(); });
  checked([&] { c.analysis.validate(); });
  if (c.bootstrap.resamples < 1000) throw ConfigError("analysis.bootstrap_resamples: must be >= 1000");
  if (!(c.bootstrap.confidence > 0.0 && c.bootstrap.confidence < 1.0))
    throw ConfigError("analysis.confidence: must lie in (0, 1)");
  if (c.threads == 0) throw ConfigError("threads: must be >= 1");
  if (c.experiment == ExperimentType::Intervention ||
      (c.experiment == ExperimentType::Sweep && c.sweep_axis == SweepAxis::TStar))
    checked([&] { c.intervention.validate(c.analysis); });
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;

  auto& s = j["scenario"];
  s["kind"] = std::string(to_string(c.scenario.kind));
  if (c.scenario.kind == ScenarioKind::Dual)
    s["factions"] = {std::string(to_string(c.scenario.dual[0])), std::string(to_string(c.scenario.dual[1]))};
  s["n"] = c.scenario.n;
  s["replicates"] = c.scenario.replicate_count;
  s["dominant_mean"] = c.scenario.dominant_mean;
  s["recessive_mean"] = c.scenario.recessive_mean;
  s["spread"] = c.scenario.spread;
  s["uniform_low"] = c.scenario.uniform_low;
  s["uniform_high"] = c.scenario.uniform_high;
  s["opinion_low"] = c.scenario.opinion_low;
  s["opinion_high"] = c.scenario.opinion_high;
  s["weight_low"] = c.scenario.weight_low;
  s["weight_high"] = c.scenario.weight_high;
  s["shuffle_dual"] = c.scenario.shuffle_dual;

  j["model"] = {{"theta_h", c.constants.theta_h},
                {"theta_a", c.constants.theta_a},
                {"dt", c.constants.dt},
                {"noise_sigma", c.constants.noise_sigma}};
  j["analysis"] = {{"steps", c.analysis.steps},
                   {"window_step", c.analysis.window_step},
                   {"bin_width", c.analysis.bin_width},
                   {"log_base", c.analysis.log_base},
                   {"tau", c.analysis.tau},
                   {"bootstrap_resamples", c.bootstrap.resamples},
                   {"confidence", c.bootstrap.confidence}};

  auto& e = j["experiment"];
  e["type"] = std::string(to_string(c.experiment));
  e["transitions"] = json::array();
  for (const auto& t : c.intervention.transitions) e["transitions"].push_back(t.label());
  e["t_star"] = c.intervention.t_stars;
  e["focal_nodes"] = c.intervention.focal_nodes;
  e["effect_gap"] = c.intervention.effect_gap;
  e["null_intervention"] = c.intervention.mode == ReassignMode::Keep;
  if (!c.sweep_values.empty() || c.experiment == ExperimentType::Sweep)
    e["sweep"] = {{"axis", std::string(to_string(c.sweep_axis))}, {"values", c.sweep_values}};
  return j;
}

std::string config_hash(const RunConfig& config) {
  auto j = to_json(config);
  j.erase("output_dir");
  j.erase("threads");
  return fmt::format("{:016x}", fnv1a(j.dump()));
}

}  // namespace adaptnet
