#include "aif/config.hpp"

#include <cstdlib>

#include "aif/errors.hpp"
#include "aif/model_io.hpp"

namespace aif {

using nlohmann::json;

namespace {

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw Error(ErrorKind::Parse, what + " must be a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) throw Error(ErrorKind::Parse, what + " must be a string");
  return v.get<std::string>();
}

void apply_tmaze_overrides(const json& overrides, tmaze::Params& p) {
  if (!overrides.is_object()) throw Error(ErrorKind::Parse, "environment.overrides must be an object");
  for (const auto& [key, value] : overrides.items()) {
    const std::string what = "environment.overrides." + key;
    if (key == "preference_magnitude") p.preference_magnitude = number(value, what);
    else if (key == "stray_cue_prob") p.stray_cue_prob = number(value, what);
    else if (key == "reward_direct") p.reward_direct = number(value, what);
    else if (key == "reward_after_cue") p.reward_after_cue = number(value, what);
    else if (key == "punishment") p.punishment = number(value, what);
    else throw Error(ErrorKind::Config, "unknown T-Maze override '" + key + "'");
  }
}

AgentSpec agent_from_json(const json& v, double default_gamma) {
  AgentSpec a;
  a.gamma = default_gamma;
  const json doc = v.is_string() ? json{{"kind", v}} : v;
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "agents entries must be objects or kind names");
  const std::string kind = text(doc.value("kind", json()), "agent kind");
  const auto parsed = parse_objective_kind(kind);
  if (!parsed) throw Error(ErrorKind::Config, "unknown agent kind '" + kind + "'");
  a.kind = *parsed;
  // Reward maximizers sample to break their ties; the others take the argmax.
  a.mode = a.kind == ObjectiveKind::ExpectedReward ? SelectionMode::Sample : SelectionMode::Argmax;
  if (doc.contains("selection")) {
    const std::string mode = text(doc["selection"], "agent selection");
    const auto m = parse_selection_mode(mode);
    if (!m) throw Error(ErrorKind::Config, "unknown selection mode '" + mode + "'");
    a.mode = *m;
  }
  if (doc.contains("name")) a.name = text(doc["name"], "agent name");
  if (doc.contains("gamma")) a.gamma = number(doc["gamma"], "agent gamma");
  if (doc.contains("reward_per_obs")) {
    const auto& r = doc["reward_per_obs"];
    if (!r.is_array()) throw Error(ErrorKind::Parse, "reward_per_obs must be an array");
    for (const auto& x : r) a.reward_per_obs.push_back(number(x, "reward_per_obs entry"));
  }
  return a;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "config document must be an object");
  ExperimentConfig c;

  if (doc.contains("environment")) {
    const auto& env = doc["environment"];
    if (env.is_string()) {
      c.environment.name = env.get<std::string>();
    } else if (env.is_object()) {
      c.environment.name = text(env.value("name", json("tmaze")), "environment.name");
      if (env.contains("overrides")) {
        if (c.environment.name != "tmaze") throw Error(ErrorKind::Config, "overrides are only defined for tmaze");
        apply_tmaze_overrides(env["overrides"], c.environment.tmaze);
      }
    } else {
      throw Error(ErrorKind::Parse, "environment must be a name or an object");
    }
  }

  const double gamma = doc.contains("gamma") ? number(doc["gamma"], "gamma") : 1.0;
  if (!doc.contains("agents")) throw Error(ErrorKind::Parse, "missing field 'agents'");
  if (!doc["agents"].is_array()) throw Error(ErrorKind::Parse, "agents must be an array");
  for (const auto& a : doc["agents"]) c.agents.push_back(agent_from_json(a, gamma));

  if (!doc.contains("n_trials")) throw Error(ErrorKind::Parse, "missing field 'n_trials'");
  const auto& n = doc["n_trials"];
  if (!n.is_number_integer()) throw Error(ErrorKind::Parse, "n_trials must be an integer");
  if (n.get<long long>() < 1) throw Error(ErrorKind::Config, "n_trials must be at least 1");
  c.n_trials = n.get<std::size_t>();

  if (doc.contains("master_seed")) {
    const auto& s = doc["master_seed"];
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      throw Error(ErrorKind::Parse, "master_seed must be a non-negative integer");
    }
    c.master_seed = s.get<std::uint64_t>();
  }
  if (doc.contains("threads")) {
    const auto& t = doc["threads"];
    if (!t.is_number_integer() || t.get<long long>() < 0) throw Error(ErrorKind::Parse, "threads must be a non-negative integer");
    c.threads = t.get<unsigned>();
  }
  if (doc.contains("output_dir")) c.output_dir = text(doc["output_dir"], "output_dir");

  check_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  auto config = config_from_json(read_json_file(path));
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') config.output_dir = dir;
  return config;
}

}  // namespace aif
