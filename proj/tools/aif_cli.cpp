#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aif/config.hpp"
#include "aif/errors.hpp"
#include "aif/harness.hpp"
#include "aif/model_io.hpp"
#include "aif/planning.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(aif::ErrorKind kind) {
  switch (kind) {
    case aif::ErrorKind::Parse:
    case aif::ErrorKind::Config:
      return kExitInput;
    default:
      return kExitDomain;
  }
}

// Accepts a comma-separated list of indices or labels.
std::vector<aif::Index> parse_symbols(const std::string& list, std::size_t count,
                                      const std::vector<std::string>& labels, const std::string& what) {
  std::vector<aif::Index> out;
  if (list.empty()) return out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    aif::Index value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec == std::errc() && ptr == item.data() + item.size()) {
      if (value >= count) {
        throw aif::Error(aif::ErrorKind::InvalidHistory, what + " index " + item + " out of range");
      }
      out.push_back(value);
      continue;
    }
    const auto it = std::find(labels.begin(), labels.end(), item);
    if (it == labels.end()) throw aif::Error(aif::ErrorKind::Parse, "unknown " + what + " '" + item + "'");
    out.push_back(static_cast<aif::Index>(it - labels.begin()));
  }
  return out;
}

int cmd_validate(const std::string& path) {
  const auto model = aif::model_from_json(aif::read_json_file(path));
  const auto report = aif::validate_model(model);
  std::cout << report.to_string();
  return report.ok() ? kExitOk : kExitDomain;
}

int cmd_plan(const std::string& path, const std::string& obs, const std::string& actions, double gamma) {
  const auto model = aif::load_model(path);
  aif::History history;
  history.observations = parse_symbols(obs, model.n_obs, model.labels.observations, "observation");
  history.actions = parse_symbols(actions, model.n_actions, model.labels.actions, "action");
  if (history.observations.empty()) {
    throw aif::Error(aif::ErrorKind::InvalidHistory, "--obs needs at least the initial observation");
  }
  const auto posterior = aif::policy_posterior(model, history, gamma);

  std::vector<std::size_t> order(posterior.policies.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return posterior.breakdowns[a].total < posterior.breakdowns[b].total;
  });

  std::cout << "policy,total,risk,ambiguity,extrinsic,intrinsic,residual,posterior\n";
  for (const auto i : order) {
    const auto& policy = posterior.policies[i];
    std::string name;
    for (std::size_t k = 0; k < policy.actions.size(); ++k) {
      if (k > 0) name += ' ';
      name += model.action_label(policy.actions[k]);
    }
    const auto& b = posterior.breakdowns[i];
    std::cout << name << ',' << aif::format_decimal(b.total) << ',' << aif::format_decimal(b.risk) << ','
              << aif::format_decimal(b.ambiguity) << ',' << aif::format_decimal(b.extrinsic) << ','
              << aif::format_decimal(b.intrinsic) << ',' << aif::format_decimal(b.residual) << ','
              << aif::format_decimal(posterior.probs[i]) << '\n';
  }
  return kExitOk;
}

int cmd_run(const std::string& path) {
  const auto config = aif::load_config(path);
  const auto model = aif::make_model(config.environment);
  const auto result = aif::run_experiment(config);
  aif::write_outputs(result, config, model, config.output_dir);
  for (const auto& s : result.summary) {
    std::cout << s.agent << ": mean " << aif::format_decimal(s.mean) << " +/- " << aif::format_decimal(s.std_error)
              << ", total " << aif::format_decimal(s.cumulative.empty() ? 0.0 : s.cumulative.back()) << '\n';
  }
  std::cout << "wrote " << config.output_dir.string() << '\n';
  return kExitOk;
}

int cmd_trace(const std::string& path, std::size_t trial_index) {
  const auto config = aif::load_config(path);
  const auto model = aif::make_model(config.environment);
  const auto seed = aif::trial_seed(config.master_seed, trial_index);
  for (const auto& agent : aif::resolved_agents(config)) {
    auto env = aif::make_environment(config.environment);
    const auto outcome = aif::run_trial(model, *env, agent, trial_index, seed);
    const auto& rec = outcome.record;
    std::cout << "# agent " << rec.agent << ", trial " << trial_index << ", context " << rec.context << ", score "
              << aif::format_decimal(rec.score) << '\n';
    for (std::size_t t = 0; t < rec.observations.size(); ++t) {
      std::cout << "t=" << t << " observation " << model.obs_label(rec.observations[t]);
      if (t < rec.actions.size()) std::cout << ", action " << model.action_label(rec.actions[t]);
      std::cout << '\n';
    }
    std::cout << "decision_time,belief_time,state,probability\n";
    const auto& per_decision = outcome.beliefs.per_decision;
    for (std::size_t d = 0; d < per_decision.size(); ++d) {
      for (std::size_t b = 0; b < per_decision[d].per_time.size(); ++b) {
        const auto& q = per_decision[d].per_time[b];
        for (aif::Index s = 0; s < q.size(); ++s) {
          std::cout << d << ',' << b << ',' << model.state_label(s) << ',' << aif::format_decimal(q[s]) << '\n';
        }
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete active inference agents and the T-Maze benchmark"};
  app.require_subcommand(1);

  std::string model_path;
  auto* validate = app.add_subcommand("validate", "Check a model file and print the validation report");
  validate->add_option("model", model_path, "Model JSON file")->required();

  std::string obs = "0";
  std::string actions;
  double gamma = 1.0;
  auto* plan = app.add_subcommand("plan", "Print the expected free energy of every remaining policy");
  plan->add_option("model", model_path, "Model JSON file")->required();
  plan->add_option("--obs", obs, "Observations so far, comma separated indices or labels")->capture_default_str();
  plan->add_option("--actions", actions, "Actions so far, comma separated indices or labels");
  plan->add_option("--gamma", gamma, "Policy precision")->capture_default_str();

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment and write its output files");
  run->add_option("config", config_path, "Experiment JSON file")->required();

  std::size_t trial_index = 0;
  auto* trace = app.add_subcommand("trace", "Replay one trial per agent and print its belief trace");
  trace->add_option("config", config_path, "Experiment JSON file")->required();
  trace->add_option("--trial", trial_index, "Trial index")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*validate) return cmd_validate(model_path);
    if (*plan) return cmd_plan(model_path, obs, actions, gamma);
    if (*run) return cmd_run(config_path);
    if (*trace) return cmd_trace(config_path, trial_index);
  } catch (const aif::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInput;
}
