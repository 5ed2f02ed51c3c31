#include "aif/planning.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "aif/errors.hpp"

namespace aif {

namespace {

double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

struct PolicyEvaluation {
  EfeBreakdown efe;
  double expected_reward = 0.0;
  double residual_direct = 0.0;
};

// Caches everything about the preference model that does not depend on the
// policy under evaluation.
class PolicyEvaluator {
 public:
  PolicyEvaluator(const GenerativeModel& model, const History& history, const PreferencePosterior& preferences)
      : model_(model), history_(history), entropies_(likelihood_entropies(model)) {
    check_history(model, history);
    if (preferences.future_states.size() != remaining() || preferences.future_observations.size() != remaining()) {
      throw Error(ErrorKind::DimensionMismatch, "preference posterior does not cover the remaining horizon");
    }
    for (std::size_t k = 0; k < remaining(); ++k) {
      log_pref_states_.push_back(logs(preferences.future_states[k]));
      log_pref_obs_.push_back(logs(preferences.future_observations[k]));
    }
  }

  PolicyEvaluator(const GenerativeModel& model, const History& history)
      : PolicyEvaluator(model, history, preferential_inference(model, history)) {}

  std::size_t remaining() const { return model_.horizon - history_.time(); }

  MarginalBeliefs beliefs(const Policy& policy) const {
    if (policy.actions.size() != remaining()) {
      throw Error(ErrorKind::InvalidHistory, "policy length " + std::to_string(policy.actions.size()) +
                                                 " does not match remaining horizon " +
                                                 std::to_string(remaining()));
    }
    return filter_and_smooth(model_, history_, policy);
  }

  PolicyEvaluation evaluate(const Policy& policy, std::span<const double> reward_per_obs) const {
    const auto q_all = beliefs(policy);
    const std::size_t t = history_.time();
    const std::size_t n_s = model_.n_states;
    const std::size_t n_o = model_.n_obs;
    const auto& lik = model_.likelihood;

    PolicyEvaluation out;
    EfeBreakdown& e = out.efe;
    std::vector<double> qo(n_o);
    for (std::size_t tau = t + 1; tau <= model_.horizon; ++tau) {
      const Categorical& q = q_all.per_time[tau];
      const auto& log_ps = log_pref_states_[tau - t - 1];
      const auto& log_po = log_pref_obs_[tau - t - 1];
      for (Index o = 0; o < n_o; ++o) {
        double acc = 0.0;
        for (Index s = 0; s < n_s; ++s) acc += lik(o, s) * q[s];
        qo[o] = acc;
      }
      for (Index s = 0; s < n_s; ++s) {
        if (q[s] <= 0.0) continue;
        const double log_q = std::log(q[s]);
        e.risk += q[s] * (log_q - log_ps[s]);
        e.ambiguity += q[s] * entropies_[s];
        for (Index o = 0; o < n_o; ++o) {
          const double joint = q[s] * lik(o, s);
          if (joint <= 0.0) continue;
          const double log_a = std::log(lik(o, s));
          e.total += joint * (log_q - log_ps[s] - log_a);
          e.intrinsic += joint * (log_a - std::log(qo[o]));
          out.residual_direct += joint * (log_q - log_ps[s] - std::log(qo[o]) + log_po[o]);
        }
      }
      for (Index o = 0; o < n_o; ++o) {
        if (qo[o] <= 0.0) continue;
        e.extrinsic += qo[o] * log_po[o];
        if (!reward_per_obs.empty()) out.expected_reward += qo[o] * reward_per_obs[o];
      }
    }
    e.residual = e.total + e.extrinsic + e.intrinsic;
    return out;
  }

 private:
  const GenerativeModel& model_;
  const History& history_;
  std::vector<double> entropies_;
  std::vector<std::vector<double>> log_pref_states_;  // per future timestep
  std::vector<std::vector<double>> log_pref_obs_;

  static std::vector<double> logs(const Categorical& p) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = safe_log(p[i]);
    return out;
  }
};

void check_reward(const GenerativeModel& model, ObjectiveKind kind, std::span<const double> reward) {
  const bool needs_reward = kind == ObjectiveKind::ExpectedReward || kind == ObjectiveKind::RewardPlusInfoGain;
  if (needs_reward && reward.size() != model.n_obs) {
    throw Error(ErrorKind::DimensionMismatch, "reward_per_obs has " + std::to_string(reward.size()) +
                                                  " entries, model has " + std::to_string(model.n_obs) +
                                                  " observations");
  }
}

double score_of(const PolicyEvaluation& ev, ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::ExpectedFreeEnergy: return -ev.efe.total;
    case ObjectiveKind::ExpectedReward: return ev.expected_reward;
    case ObjectiveKind::RewardPlusInfoGain: return ev.expected_reward + ev.efe.intrinsic;
    case ObjectiveKind::InfoGainOnly: return ev.efe.intrinsic;
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::ExpectedFreeEnergy: return "expected_free_energy";
    case ObjectiveKind::ExpectedReward: return "expected_reward";
    case ObjectiveKind::RewardPlusInfoGain: return "reward_plus_info_gain";
    case ObjectiveKind::InfoGainOnly: return "info_gain";
  }
  return "unknown";
}

std::optional<ObjectiveKind> parse_objective_kind(std::string_view name) {
  for (auto kind : {ObjectiveKind::ExpectedFreeEnergy, ObjectiveKind::ExpectedReward,
                    ObjectiveKind::RewardPlusInfoGain, ObjectiveKind::InfoGainOnly}) {
    if (name == to_string(kind)) return kind;
  }
  if (name == "efe") return ObjectiveKind::ExpectedFreeEnergy;
  return std::nullopt;
}

std::string_view to_string(SelectionMode mode) {
  return mode == SelectionMode::Argmax ? "argmax" : "sample";
}

std::optional<SelectionMode> parse_selection_mode(std::string_view name) {
  if (name == "argmax") return SelectionMode::Argmax;
  if (name == "sample") return SelectionMode::Sample;
  return std::nullopt;
}

EfeBreakdown efe_breakdown(const GenerativeModel& model, const History& history, const Policy& policy) {
  return PolicyEvaluator(model, history).evaluate(policy, {}).efe;
}

double expected_posterior_divergence(const GenerativeModel& model, const History& history,
                                     const Policy& policy) {
  return PolicyEvaluator(model, history).evaluate(policy, {}).residual_direct;
}

TrajectoryEfe trajectory_efe(const GenerativeModel& model, const History& history, const Policy& policy,
                             std::size_t enumeration_cap) {
  const std::size_t t = history.time();
  const std::size_t remaining = model.horizon - t;
  if (policy.actions.size() != remaining) {
    throw Error(ErrorKind::InvalidHistory, "policy length does not match remaining horizon");
  }
  const auto posterior = enumerate_posterior(model, history, policy, enumeration_cap);
  const std::size_t n = model.n_states;
  std::size_t block = 1;
  for (std::size_t k = 0; k < remaining; ++k) block *= n;

  // Future states are the least significant digits of the trajectory index.
  std::vector<double> future(block, 0.0);
  for (std::size_t i = 0; i < posterior.size(); ++i) future[i % block] += posterior.probs()[i];

  const auto ps = state_preferences(model);
  const auto entropies = likelihood_entropies(model);
  TrajectoryEfe out;
  for (std::size_t f = 0; f < block; ++f) {
    const double q = future[f];
    if (q <= 0.0) continue;
    double log_pref = 0.0;
    double amb = 0.0;
    std::size_t rest = f;
    for (std::size_t k = 0; k < remaining; ++k) {
      const Index s = rest % n;
      rest /= n;
      log_pref += std::log(ps[s]);
      amb += entropies[s];
    }
    out.risk += q * (std::log(q) - log_pref);
    out.ambiguity += q * amb;
  }
  out.total = out.risk + out.ambiguity;
  return out;
}

std::vector<Policy> enumerate_policies(std::size_t n_actions, std::size_t length, std::size_t cap) {
  if (n_actions == 0) throw Error(ErrorKind::DimensionMismatch, "no actions to enumerate");
  std::size_t count = 1;
  for (std::size_t k = 0; k < length; ++k) {
    if (count > cap / n_actions) throw Error(ErrorKind::PolicySpaceOverflow, "policy space exceeds cap");
    count *= n_actions;
  }
  if (count > cap) throw Error(ErrorKind::PolicySpaceOverflow, "policy space exceeds cap");
  std::vector<Policy> out;
  out.reserve(count);
  std::vector<Index> seq(length, 0);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(Policy{seq});
    for (std::size_t k = length; k-- > 0;) {
      if (++seq[k] < n_actions) break;
      seq[k] = 0;
    }
  }
  return out;
}

PolicyPosterior evaluate_policies(const GenerativeModel& model, const History& history,
                                  const PlanningOptions& options) {
  check_history(model, history);
  return evaluate_policies(model, history, preferential_inference(model, history), options);
}

PolicyPosterior evaluate_policies(const GenerativeModel& model, const History& history,
                                  const PreferencePosterior& preferences, const PlanningOptions& options) {
  if (!(options.gamma >= 0.0) || !std::isfinite(options.gamma)) {
    throw Error(ErrorKind::Config, "gamma must be a finite non-negative number");
  }
  check_reward(model, options.objective, options.reward_per_obs);
  PolicyEvaluator evaluator(model, history, preferences);
  if (evaluator.remaining() == 0) throw Error(ErrorKind::InvalidHistory, "no decisions remain before the horizon");

  PolicyPosterior out;
  out.n_actions = model.n_actions;
  out.policies = enumerate_policies(model.n_actions, evaluator.remaining(), options.policy_cap);
  out.scores.reserve(out.policies.size());
  out.log_weights.reserve(out.policies.size());
  out.breakdowns.reserve(out.policies.size());
  for (const auto& policy : out.policies) {
    const auto ev = evaluator.evaluate(policy, options.reward_per_obs);
    out.breakdowns.push_back(ev.efe);
    out.scores.push_back(score_of(ev, options.objective));
    out.log_weights.push_back(options.gamma * out.scores.back());
  }
  out.probs = Categorical::from_log_weights(out.log_weights);
  return out;
}

PolicyPosterior policy_posterior(const GenerativeModel& model, const History& history, double gamma,
                                 std::size_t policy_cap) {
  PlanningOptions options;
  options.gamma = gamma;
  options.policy_cap = policy_cap;
  return evaluate_policies(model, history, options);
}

Categorical action_marginal(const PolicyPosterior& posterior) {
  if (posterior.policies.empty()) throw std::invalid_argument("action_marginal of an empty posterior");
  std::vector<double> marginal(posterior.n_actions, 0.0);
  for (std::size_t i = 0; i < posterior.policies.size(); ++i) {
    marginal[posterior.policies[i].actions.front()] += posterior.probs[i];
  }
  return Categorical::normalized(std::move(marginal));
}

Index select_action(const Categorical& marginal, SelectionMode mode, Substream* rng) {
  if (mode == SelectionMode::Argmax) return marginal.argmax();
  if (rng == nullptr) throw std::invalid_argument("sampled selection needs a random substream");
  const double u = rng->uniform();
  double cumulative = 0.0;
  Index last_supported = 0;
  for (Index a = 0; a < marginal.size(); ++a) {
    if (marginal[a] <= 0.0) continue;
    last_supported = a;
    cumulative += marginal[a];
    if (u < cumulative) return a;
  }
  return last_supported;
}

double alternative_objective(const GenerativeModel& model, const History& history, const Policy& policy,
                             ObjectiveKind kind, std::span<const double> reward_per_obs) {
  check_reward(model, kind, reward_per_obs);
  const bool uses_reward = kind == ObjectiveKind::ExpectedReward || kind == ObjectiveKind::RewardPlusInfoGain;
  return score_of(PolicyEvaluator(model, history).evaluate(policy, uses_reward ? reward_per_obs : std::span<const double>{}), kind);
}

MarginalBeliefs averaged_beliefs(const GenerativeModel& model, const History& history,
                                 const PolicyPosterior& posterior) {
  const std::size_t length = model.horizon + 1;
  std::vector<std::vector<double>> acc(length, std::vector<double>(model.n_states, 0.0));
  for (std::size_t i = 0; i < posterior.policies.size(); ++i) {
    const double w = posterior.probs[i];
    if (w == 0.0) continue;
    const auto beliefs = filter_and_smooth(model, history, posterior.policies[i]);
    for (std::size_t k = 0; k < length; ++k) {
      for (Index s = 0; s < model.n_states; ++s) acc[k][s] += w * beliefs.per_time[k][s];
    }
  }
  MarginalBeliefs out;
  for (auto& m : acc) out.per_time.push_back(Categorical::normalized(std::move(m)));
  return out;
}

}  // namespace aif
