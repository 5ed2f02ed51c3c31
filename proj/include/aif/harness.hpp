#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "aif/envs.hpp"
#include "aif/inference.hpp"
#include "aif/model.hpp"
#include "aif/planning.hpp"

namespace aif {

struct AgentSpec {
  std::string name;  // unique within an experiment; defaults to the objective name
  ObjectiveKind kind = ObjectiveKind::ExpectedFreeEnergy;
  SelectionMode mode = SelectionMode::Argmax;
  double gamma = 1.0;
  std::vector<double> reward_per_obs;  // empty: the model's observation log-preferences
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::string agent;
  ObjectiveKind kind = ObjectiveKind::ExpectedFreeEnergy;
  std::string context;
  std::vector<Index> hidden_states;    // s_0..s_T, logging only
  std::vector<Index> observations;     // o_0..o_T
  std::vector<Index> actions;          // a_1..a_T
  std::vector<double> partial_scores;  // score of s_0..s_k for k = 0..T
  double score = 0.0;
  std::vector<Categorical> action_marginals;       // one per decision time
  std::vector<Categorical> policy_posteriors;      // one per decision time
  std::vector<std::vector<EfeBreakdown>> efe;      // per decision time, per policy; EFE agents only
};

/// Beliefs over timesteps 0..T held at each decision time 0..T. Future
/// timesteps are averaged over the policy posterior; the last entry is the
/// smoothed posterior after the final observation.
struct BeliefTrace {
  std::vector<MarginalBeliefs> per_decision;
};

struct TrialOutcome {
  TrialRecord record;
  BeliefTrace beliefs;
};

/// One receding-horizon episode: at every decision time infer preferences
/// and beliefs, score every remaining policy, select and execute one
/// action. Errors are rethrown with the trial index attached.
TrialOutcome run_trial(const GenerativeModel& model, Environment& env, const AgentSpec& agent,
                       std::size_t trial_index, std::uint64_t trial_seed);

struct EnvironmentSpec {
  std::string name = "tmaze";
  tmaze::Params tmaze;
};

GenerativeModel make_model(const EnvironmentSpec& spec);
std::unique_ptr<Environment> make_environment(const EnvironmentSpec& spec);
std::vector<double> default_reward(const EnvironmentSpec& spec);

struct ExperimentConfig {
  EnvironmentSpec environment;
  std::vector<AgentSpec> agents;
  std::size_t n_trials = 50;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::filesystem::path output_dir = "out";
};

/// Throws Error(Config) for unusable configurations.
void check_config(const ExperimentConfig& config);

/// Agents with empty names and rewards filled in from the environment.
std::vector<AgentSpec> resolved_agents(const ExperimentConfig& config);

/// Seed of trial i; environment and agent draw from separate children.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index);

struct AgentSummary {
  std::string agent;
  ObjectiveKind kind = ObjectiveKind::ExpectedFreeEnergy;
  std::vector<double> scores;
  std::vector<double> cumulative;
  double mean = 0.0;
  double std_error = 0.0;
};

struct ExperimentResult {
  std::vector<TrialOutcome> trials;  // agent-major, then trial index
  std::vector<AgentSummary> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

AgentSummary summarize(const std::string& agent, ObjectiveKind kind, const std::vector<double>& scores);

/// Writes trials.csv, beliefs.csv, efe.csv and summary.json into `dir`.
void write_outputs(const ExperimentResult& result, const ExperimentConfig& config, const GenerativeModel& model,
                   const std::filesystem::path& dir);

/// Decimal formatting used by every output file (12 significant digits).
std::string format_decimal(double value);

}  // namespace aif
