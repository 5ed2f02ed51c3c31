#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aif/config.hpp"
#include "aif/harness.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace aif;
using namespace aif::testing;

namespace {

AgentSpec agent(const std::string& name, ObjectiveKind kind, SelectionMode mode) {
  AgentSpec a;
  a.name = name;
  a.kind = kind;
  a.mode = mode;
  return a;
}

ExperimentConfig three_agents(std::size_t n_trials) {
  ExperimentConfig c;
  c.agents = {agent("efe", ObjectiveKind::ExpectedFreeEnergy, SelectionMode::Argmax),
              agent("reward", ObjectiveKind::ExpectedReward, SelectionMode::Sample),
              agent("info_gain", ObjectiveKind::InfoGainOnly, SelectionMode::Argmax)};
  c.n_trials = n_trials;
  c.master_seed = 99;
  return c;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool same_record(const TrialRecord& a, const TrialRecord& b) {
  if (a.actions != b.actions || a.observations != b.observations || a.hidden_states != b.hidden_states ||
      a.score != b.score || a.context != b.context || a.action_marginals.size() != b.action_marginals.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.action_marginals.size(); ++k) {
    if (!std::equal(a.action_marginals[k].begin(), a.action_marginals[k].end(), b.action_marginals[k].begin())) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("EFE agent trial on the T-Maze") {
  const EnvironmentSpec spec;
  const auto model = make_model(spec);
  const auto a = agent("efe", ObjectiveKind::ExpectedFreeEnergy, SelectionMode::Argmax);
  for (std::size_t i = 0; i < 20; ++i) {
    auto env = make_environment(spec);
    const auto out = run_trial(model, *env, a, i, trial_seed(5, i));
    const auto& r = out.record;
    REQUIRE(r.actions.size() == 2);
    CHECK(r.actions[0] == tmaze::Bottom);
    CHECK(r.actions[1] == (r.context == "reward-left" ? tmaze::TopLeft : tmaze::TopRight));
    CHECK(r.score == 5.0);
    CHECK(r.partial_scores == std::vector<double>{0.0, 0.0, 5.0});
    CHECK(r.efe.size() == 2);
    CHECK(r.efe[0].size() == 16);
    CHECK(r.efe[1].size() == 4);
    REQUIRE(out.beliefs.per_decision.size() == 3);
    for (const auto& d : out.beliefs.per_decision) {
      CHECK(d.per_time.size() == 3);
      for (const auto& q : d.per_time) CHECK(std::abs(sum_of(q) - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("reward agent samples its first action uniformly") {
  auto config = three_agents(10'000);
  config.agents = {config.agents[1]};
  const auto result = run_experiment(config);
  std::array<double, 4> counts{};
  for (const auto& t : result.trials) counts[t.record.actions[0]] += 1.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - 2500.0) * (c - 2500.0) / 2500.0;
  // 3 degrees of freedom, p = 0.001
  CHECK(chi2 < 16.266);
}

TEST_CASE("info-gain agent leaves the middle at t = 0") {
  const EnvironmentSpec spec;
  const auto model = make_model(spec);
  const auto a = agent("ig", ObjectiveKind::InfoGainOnly, SelectionMode::Argmax);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto env = make_environment(spec);
    const auto out = run_trial(model, *env, a, 0, seed);
    CHECK(out.record.actions[0] != tmaze::Middle);
  }
}

TEST_CASE("experiments are deterministic and independent of thread count") {
  auto config = three_agents(40);
  config.threads = 1;
  const auto serial = run_experiment(config);
  config.threads = 4;
  const auto parallel = run_experiment(config);
  REQUIRE(serial.trials.size() == 120);
  REQUIRE(parallel.trials.size() == 120);
  for (std::size_t i = 0; i < serial.trials.size(); ++i) {
    CHECK(same_record(serial.trials[i].record, parallel.trials[i].record));
  }
}

TEST_CASE("seed isolation: trials run out of order reproduce the experiment") {
  const auto config = three_agents(12);
  const auto result = run_experiment(config);
  const auto model = make_model(config.environment);
  for (std::size_t ai = 0; ai < config.agents.size(); ++ai) {
    for (std::size_t k = 0; k < config.n_trials; ++k) {
      const std::size_t i = config.n_trials - 1 - k;
      auto env = make_environment(config.environment);
      const auto out = run_trial(model, *env, config.agents[ai], i, trial_seed(config.master_seed, i));
      CHECK(same_record(out.record, result.trials[ai * config.n_trials + i].record));
    }
  }
}

TEST_CASE("summary series are prefix sums") {
  const auto result = run_experiment(three_agents(30));
  for (const auto& s : result.summary) {
    double running = 0.0;
    REQUIRE(s.cumulative.size() == 30);
    for (std::size_t i = 0; i < s.scores.size(); ++i) {
      running += s.scores[i];
      CHECK(s.cumulative[i] == running);
    }
  }
  CHECK(result.summary[0].cumulative.back() == 150.0);
  CHECK(result.summary[0].std_error == 0.0);
}

TEST_CASE("output files round-trip and rerun identically") {
  const auto dir = std::filesystem::temp_directory_path() / "aif_harness_test";
  std::filesystem::remove_all(dir);
  const auto config = three_agents(8);
  const auto model = make_model(config.environment);
  const auto result = run_experiment(config);
  write_outputs(result, config, model, dir / "a");
  write_outputs(run_experiment(config), config, model, dir / "b");
  for (const char* f : {"trials.csv", "beliefs.csv", "efe.csv", "summary.json"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }

  const auto efe = read_csv(dir / "a" / "efe.csv");
  REQUIRE(!efe.empty());
  CHECK(efe[0] == std::vector<std::string>{"trial", "agent", "t", "policy_index", "total", "risk", "ambiguity",
                                           "extrinsic", "intrinsic", "residual"});
  std::size_t checked = 0;
  for (std::size_t r = 1; r < efe.size(); ++r) {
    const auto& row = efe[r];
    const std::size_t trial = std::stoul(row[0]);
    const std::size_t t = std::stoul(row[2]);
    const std::size_t pi = std::stoul(row[3]);
    REQUIRE(row[1] == "efe");
    const auto& b = result.trials[trial].record.efe.at(t).at(pi);
    const double fields[] = {b.total, b.risk, b.ambiguity, b.extrinsic, b.intrinsic, b.residual};
    for (int k = 0; k < 6; ++k) CHECK(std::abs(std::stod(row[4 + k]) - fields[k]) <= 1e-10);
    ++checked;
  }
  CHECK(checked == 8 * (16 + 4));

  const auto trials = read_csv(dir / "a" / "trials.csv");
  CHECK(trials[0] == std::vector<std::string>{"trial", "agent", "context", "t", "action", "observation",
                                              "score_so_far"});
  CHECK(trials.size() == 1 + 3 * 8 * 3);
  CHECK(trials[3 * 8].back() == "40");

  const auto beliefs = read_csv(dir / "a" / "beliefs.csv");
  CHECK(beliefs.size() == 1 + 3 * 8 * 3 * 3 * 8);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config checks") {
  auto c = three_agents(0);
  CHECK(error_kind_of([&] { check_config(c); }) == ErrorKind::Config);
  c = three_agents(1);
  c.agents[0].gamma = 0.0;
  CHECK(error_kind_of([&] { check_config(c); }) == ErrorKind::Config);
  c = three_agents(1);
  c.agents[1].name = "efe";
  CHECK(error_kind_of([&] { check_config(c); }) == ErrorKind::Config);
  c = three_agents(1);
  c.agents.clear();
  CHECK(error_kind_of([&] { check_config(c); }) == ErrorKind::Config);
}

TEST_CASE("config documents") {
  using nlohmann::json;
  const json doc = {{"environment", {{"name", "tmaze"}, {"overrides", {{"stray_cue_prob", 0.3}}}}},
                    {"gamma", 2.0},
                    {"n_trials", 7},
                    {"master_seed", 3},
                    {"agents", json::array({json{{"kind", "expected_free_energy"}},
                                            json{{"kind", "expected_reward"}, {"name", "r"}, {"gamma", 0.5}}})}};
  const auto c = config_from_json(doc);
  CHECK(c.environment.tmaze.stray_cue_prob == 0.3);
  CHECK(c.n_trials == 7);
  CHECK(c.master_seed == 3);
  REQUIRE(c.agents.size() == 2);
  CHECK(c.agents[0].gamma == 2.0);
  CHECK(c.agents[0].mode == SelectionMode::Argmax);
  CHECK(c.agents[1].mode == SelectionMode::Sample);
  CHECK(c.agents[1].gamma == 0.5);
  CHECK(c.agents[1].name == "r");

  auto zero = doc;
  zero["n_trials"] = 0;
  CHECK(error_kind_of([&] { config_from_json(zero); }) == ErrorKind::Config);
  auto bad_kind = doc;
  bad_kind["agents"][0]["kind"] = "oracle";
  CHECK(error_kind_of([&] { config_from_json(bad_kind); }) == ErrorKind::Config);
  auto bad_type = doc;
  bad_type["n_trials"] = "many";
  CHECK(error_kind_of([&] { config_from_json(bad_type); }) == ErrorKind::Parse);
  auto bad_override = doc;
  bad_override["environment"]["overrides"]["walls"] = 2;
  CHECK(error_kind_of([&] { config_from_json(bad_override); }) == ErrorKind::Config);

  const std::filesystem::path configs = AIF_CONFIG_DIR;
  const auto fig2 = load_config(configs / "fig2.json");
  CHECK(fig2.n_trials == 50);
  CHECK(fig2.agents.size() == 3);
  CHECK(error_kind_of([&] { load_config(configs / "zero_trials.json"); }) == ErrorKind::Config);
}
