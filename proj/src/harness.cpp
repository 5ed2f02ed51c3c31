#include "aif/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "aif/errors.hpp"
#include "json.hpp"

namespace aif {

namespace {

MarginalBeliefs held_beliefs(const GenerativeModel& model, const History& history,
                             const PolicyPosterior* posterior) {
  if (posterior != nullptr) return averaged_beliefs(model, history, *posterior);
  return filter_and_smooth(model, history, Policy{});
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

double round_to_output(double v) { return std::stod(format_decimal(v)); }

}  // namespace

std::string format_decimal(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

TrialOutcome run_trial(const GenerativeModel& model, Environment& env, const AgentSpec& agent,
                       std::size_t trial_index, std::uint64_t seed) {
  try {
    TrialOutcome out;
    TrialRecord& rec = out.record;
    rec.trial_index = trial_index;
    rec.agent = agent.name.empty() ? std::string(to_string(agent.kind)) : agent.name;
    rec.kind = agent.kind;

    Substream choices(derive_seed(seed, 1));
    History history;
    history.observations.push_back(env.reset(derive_seed(seed, 0)));
    rec.context = env.context_label();
    rec.hidden_states.push_back(env.ground_truth());
    rec.partial_scores.push_back(env.score());

    PlanningOptions options;
    options.gamma = agent.gamma;
    options.objective = agent.kind;
    options.reward_per_obs = agent.reward_per_obs.empty() ? model.preferences.obs_log_pref : agent.reward_per_obs;

    while (history.time() < model.horizon) {
      const auto preferences = preferential_inference(model, history);
      const auto posterior = evaluate_policies(model, history, preferences, options);
      const auto marginal = action_marginal(posterior);
      out.beliefs.per_decision.push_back(held_beliefs(model, history, &posterior));
      rec.action_marginals.push_back(marginal);
      rec.policy_posteriors.push_back(posterior.probs);
      if (agent.kind == ObjectiveKind::ExpectedFreeEnergy) rec.efe.push_back(posterior.breakdowns);

      const Index action = select_action(marginal, agent.mode, &choices);
      const auto step = env.step(action);
      history.actions.push_back(action);
      history.observations.push_back(step.observation);
      rec.hidden_states.push_back(env.ground_truth());
      rec.partial_scores.push_back(env.score());
      if (step.done != (history.time() == model.horizon)) {
        throw Error(ErrorKind::MalformedTrajectory, "environment and model disagree on the horizon");
      }
    }
    out.beliefs.per_decision.push_back(held_beliefs(model, history, nullptr));
    rec.observations = history.observations;
    rec.actions = history.actions;
    rec.score = rec.partial_scores.back();
    return out;
  } catch (const Error& e) {
    throw Error(e.kind(), "trial " + std::to_string(trial_index) + ", agent " +
                              (agent.name.empty() ? std::string(to_string(agent.kind)) : agent.name) + ": " +
                              e.what());
  }
}

GenerativeModel make_model(const EnvironmentSpec& spec) {
  if (spec.name == "tmaze") return tmaze::tmaze_model(spec.tmaze);
  throw Error(ErrorKind::Config, "unknown environment '" + spec.name + "'");
}

std::unique_ptr<Environment> make_environment(const EnvironmentSpec& spec) {
  if (spec.name == "tmaze") return std::make_unique<tmaze::TMazeEnv>(spec.tmaze);
  throw Error(ErrorKind::Config, "unknown environment '" + spec.name + "'");
}

std::vector<double> default_reward(const EnvironmentSpec& spec) {
  if (spec.name == "tmaze") return tmaze::reward_vector(spec.tmaze);
  throw Error(ErrorKind::Config, "unknown environment '" + spec.name + "'");
}

void check_config(const ExperimentConfig& config) {
  if (config.n_trials < 1) throw Error(ErrorKind::Config, "n_trials must be at least 1");
  if (config.agents.empty()) throw Error(ErrorKind::Config, "at least one agent is required");
  std::set<std::string> names;
  for (const auto& a : config.agents) {
    if (!(a.gamma > 0.0) || !std::isfinite(a.gamma)) throw Error(ErrorKind::Config, "gamma must be positive");
    const std::string name = a.name.empty() ? std::string(to_string(a.kind)) : a.name;
    if (!names.insert(name).second) throw Error(ErrorKind::Config, "duplicate agent name '" + name + "'");
  }
  make_environment(config.environment);
}

std::vector<AgentSpec> resolved_agents(const ExperimentConfig& config) {
  std::vector<AgentSpec> agents = config.agents;
  for (auto& a : agents) {
    if (a.name.empty()) a.name = std::string(to_string(a.kind));
    if (a.reward_per_obs.empty()) a.reward_per_obs = default_reward(config.environment);
  }
  return agents;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index) {
  return derive_seed(master_seed, trial_index);
}

AgentSummary summarize(const std::string& agent, ObjectiveKind kind, const std::vector<double>& scores) {
  AgentSummary s;
  s.agent = agent;
  s.kind = kind;
  s.scores = scores;
  double running = 0.0;
  for (double x : scores) {
    running += x;
    s.cumulative.push_back(running);
  }
  const double n = static_cast<double>(scores.size());
  if (!scores.empty()) s.mean = running / n;
  if (scores.size() > 1) {
    double ss = 0.0;
    for (double x : scores) ss += (x - s.mean) * (x - s.mean);
    s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  check_config(config);
  const auto model = make_model(config.environment);
  require_valid(model);

  const auto agents = resolved_agents(config);

  const std::size_t n_jobs = agents.size() * config.n_trials;
  std::vector<TrialOutcome> outcomes(n_jobs);
  std::vector<std::exception_ptr> failures(n_jobs);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    auto env = make_environment(config.environment);
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      const std::size_t agent = job / config.n_trials;
      const std::size_t trial = job % config.n_trials;
      try {
        outcomes[job] = run_trial(model, *env, agents[agent], trial, trial_seed(config.master_seed, trial));
      } catch (...) {
        failures[job] = std::current_exception();
      }
    }
  };

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ExperimentResult result;
  result.trials = std::move(outcomes);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    std::vector<double> scores;
    for (std::size_t i = 0; i < config.n_trials; ++i) scores.push_back(result.trials[a * config.n_trials + i].record.score);
    result.summary.push_back(summarize(agents[a].name, agents[a].kind, scores));
  }
  return result;
}

void write_outputs(const ExperimentResult& result, const ExperimentConfig& config, const GenerativeModel& model,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  auto trials = open_output(dir / "trials.csv");
  trials << "trial,agent,context,t,action,observation,score_so_far\n";
  std::map<std::string, double> carried;
  for (const auto& outcome : result.trials) {
    const auto& r = outcome.record;
    const double before = carried[r.agent];
    for (std::size_t t = 0; t < r.observations.size(); ++t) {
      trials << r.trial_index << ',' << r.agent << ',' << r.context << ',' << t << ','
             << (t == 0 ? std::string() : model.action_label(r.actions[t - 1])) << ','
             << model.obs_label(r.observations[t]) << ',' << format_decimal(before + r.partial_scores[t]) << '\n';
    }
    carried[r.agent] = before + r.score;
  }

  auto beliefs = open_output(dir / "beliefs.csv");
  beliefs << "trial,agent,decision_time,belief_time,state,probability\n";
  for (const auto& outcome : result.trials) {
    const auto& r = outcome.record;
    for (std::size_t d = 0; d < outcome.beliefs.per_decision.size(); ++d) {
      const auto& held = outcome.beliefs.per_decision[d];
      for (std::size_t k = 0; k < held.per_time.size(); ++k) {
        for (Index s = 0; s < model.n_states; ++s) {
          beliefs << r.trial_index << ',' << r.agent << ',' << d << ',' << k << ',' << model.state_label(s) << ','
                  << format_decimal(held.per_time[k][s]) << '\n';
        }
      }
    }
  }

  auto efe = open_output(dir / "efe.csv");
  efe << "trial,agent,t,policy_index,total,risk,ambiguity,extrinsic,intrinsic,residual\n";
  for (const auto& outcome : result.trials) {
    const auto& r = outcome.record;
    for (std::size_t t = 0; t < r.efe.size(); ++t) {
      for (std::size_t p = 0; p < r.efe[t].size(); ++p) {
        const auto& b = r.efe[t][p];
        efe << r.trial_index << ',' << r.agent << ',' << t << ',' << p << ',' << format_decimal(b.total) << ','
            << format_decimal(b.risk) << ',' << format_decimal(b.ambiguity) << ',' << format_decimal(b.extrinsic)
            << ',' << format_decimal(b.intrinsic) << ',' << format_decimal(b.residual) << '\n';
      }
    }
  }

  nlohmann::json summary;
  summary["environment"] = config.environment.name;
  summary["n_trials"] = config.n_trials;
  summary["master_seed"] = config.master_seed;
  summary["agents"] = nlohmann::json::array();
  for (std::size_t a = 0; a < result.summary.size(); ++a) {
    const auto& s = result.summary[a];
    const auto& spec = config.agents[a];
    nlohmann::json entry;
    entry["agent"] = s.agent;
    entry["kind"] = std::string(to_string(s.kind));
    entry["selection"] = std::string(to_string(spec.mode));
    entry["gamma"] = round_to_output(spec.gamma);
    entry["mean_score"] = round_to_output(s.mean);
    entry["std_error"] = round_to_output(s.std_error);
    entry["total_score"] = round_to_output(s.cumulative.empty() ? 0.0 : s.cumulative.back());
    std::vector<double> cumulative;
    for (double v : s.cumulative) cumulative.push_back(round_to_output(v));
    entry["cumulative"] = cumulative;
    summary["agents"].push_back(std::move(entry));
  }
  auto out = open_output(dir / "summary.json");
  out << summary.dump(2) << '\n';
}

}  // namespace aif
