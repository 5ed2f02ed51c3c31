#include "aif/inference.hpp"

#include <cmath>
#include <limits>

#include "aif/errors.hpp"

namespace aif {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// Actions a_1..a_L taken along the trajectory: history then policy.
std::vector<Index> action_sequence(const GenerativeModel& model, const History& history,
                                   const Policy& policy) {
  check_history(model, history);
  std::vector<Index> actions = history.actions;
  actions.insert(actions.end(), policy.actions.begin(), policy.actions.end());
  if (actions.size() > model.horizon) {
    throw Error(ErrorKind::InvalidHistory, "history plus policy extends past the horizon");
  }
  for (Index a : policy.actions) {
    if (a >= model.n_actions) throw Error(ErrorKind::InvalidHistory, "policy action out of range");
  }
  return actions;
}

Categorical exp_normalize(std::span<const double> log_weights) {
  return Categorical::from_log_weights(log_weights);
}

}  // namespace

StateTrajectoryPosterior::StateTrajectoryPosterior(std::size_t n_states, std::size_t length,
                                                   Categorical probs)
    : n_states_(n_states), length_(length), probs_(std::move(probs)) {}

std::vector<Index> StateTrajectoryPosterior::trajectory(std::size_t i) const {
  std::vector<Index> seq(length_);
  for (std::size_t k = length_; k-- > 0;) {
    seq[k] = i % n_states_;
    i /= n_states_;
  }
  return seq;
}

MarginalBeliefs StateTrajectoryPosterior::marginals() const {
  std::vector<std::vector<double>> acc(length_, std::vector<double>(n_states_, 0.0));
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (p == 0.0) continue;
    std::size_t rest = i;
    for (std::size_t k = length_; k-- > 0;) {
      acc[k][rest % n_states_] += p;
      rest /= n_states_;
    }
  }
  MarginalBeliefs out;
  for (auto& m : acc) out.per_time.push_back(Categorical::normalized(std::move(m)));
  return out;
}

StateTrajectoryPosterior enumerate_posterior(const GenerativeModel& model, const History& history,
                                             const Policy& policy, std::size_t cap) {
  const auto actions = action_sequence(model, history, policy);
  const std::size_t length = actions.size() + 1;
  const std::size_t n = model.n_states;

  std::size_t count = 1;
  for (std::size_t k = 0; k < length; ++k) {
    if (count > cap / n) throw Error(ErrorKind::HorizonOverflow, "state-sequence space exceeds enumeration cap");
    count *= n;
  }
  if (count > cap) throw Error(ErrorKind::HorizonOverflow, "state-sequence space exceeds enumeration cap");

  std::vector<double> joint(count, 0.0);
  std::vector<Index> seq(length, 0);
  for (std::size_t i = 0; i < count; ++i) {
    double p = model.initial_belief[seq[0]];
    for (std::size_t k = 1; k < length && p > 0.0; ++k) {
      p *= model.transitions[actions[k - 1]](seq[k], seq[k - 1]);
    }
    for (std::size_t k = 0; k < history.observations.size() && p > 0.0; ++k) {
      p *= model.likelihood(history.observations[k], seq[k]);
    }
    joint[i] = p;
    // odometer increment, last timestep fastest
    for (std::size_t k = length; k-- > 0;) {
      if (++seq[k] < n) break;
      seq[k] = 0;
    }
  }

  double evidence = 0.0;
  for (double p : joint) evidence += p;
  if (!(evidence > 0.0)) throw Error(ErrorKind::ZeroEvidence, "observed history has probability 0");
  return StateTrajectoryPosterior(n, length, Categorical::normalized(std::move(joint)));
}

MarginalBeliefs filter_and_smooth(const GenerativeModel& model, const History& history,
                                  const Policy& policy) {
  const auto actions = action_sequence(model, history, policy);
  const std::size_t length = actions.size() + 1;
  const std::size_t n = model.n_states;
  const std::size_t observed = history.observations.size();

  const auto log_obs = [&](std::size_t k, Index s) {
    return k < observed ? safe_log(model.likelihood(history.observations[k], s)) : 0.0;
  };

  std::vector<std::vector<double>> alpha(length, std::vector<double>(n, kNegInf));
  for (Index s = 0; s < n; ++s) alpha[0][s] = safe_log(model.initial_belief[s]) + log_obs(0, s);

  std::vector<double> terms(n);
  for (std::size_t k = 0; k < length; ++k) {
    if (k > 0) {
      const auto& b = model.transitions[actions[k - 1]];
      for (Index next = 0; next < n; ++next) {
        for (Index s = 0; s < n; ++s) terms[s] = alpha[k - 1][s] + safe_log(b(next, s));
        alpha[k][next] = log_sum_exp(terms) + log_obs(k, next);
      }
    }
    if (!std::isfinite(log_sum_exp(alpha[k]))) {
      throw Error(ErrorKind::ZeroEvidence,
                  "observation at timestep " + std::to_string(k) + " has probability 0 given the history");
    }
  }

  std::vector<std::vector<double>> beta(length, std::vector<double>(n, 0.0));
  for (std::size_t k = length - 1; k-- > 0;) {
    const auto& b = model.transitions[actions[k]];
    for (Index s = 0; s < n; ++s) {
      for (Index next = 0; next < n; ++next) {
        terms[next] = safe_log(b(next, s)) + log_obs(k + 1, next) + beta[k + 1][next];
      }
      beta[k][s] = log_sum_exp(terms);
    }
  }

  MarginalBeliefs out;
  out.per_time.reserve(length);
  std::vector<double> post(n);
  for (std::size_t k = 0; k < length; ++k) {
    for (Index s = 0; s < n; ++s) post[s] = alpha[k][s] + beta[k][s];
    out.per_time.push_back(exp_normalize(post));
  }
  return out;
}

Categorical predictive_observation(const GenerativeModel& model, const Categorical& state_belief) {
  std::vector<double> po(model.n_obs, 0.0);
  for (Index o = 0; o < model.n_obs; ++o) {
    for (Index s = 0; s < model.n_states; ++s) po[o] += model.likelihood(o, s) * state_belief[s];
  }
  return Categorical::normalized(std::move(po));
}

std::vector<Categorical> predictive_observations(const GenerativeModel& model,
                                                 const MarginalBeliefs& beliefs) {
  std::vector<Categorical> out;
  out.reserve(beliefs.per_time.size());
  for (const auto& q : beliefs.per_time) out.push_back(predictive_observation(model, q));
  return out;
}

Categorical conditional_state_posterior(const GenerativeModel& model, const Categorical& state_belief,
                                        Index hypothetical_obs) {
  if (hypothetical_obs >= model.n_obs) throw Error(ErrorKind::DimensionMismatch, "observation index out of range");
  std::vector<double> post(model.n_states);
  double mass = 0.0;
  for (Index s = 0; s < model.n_states; ++s) {
    post[s] = model.likelihood(hypothetical_obs, s) * state_belief[s];
    mass += post[s];
  }
  if (!(mass > 0.0)) {
    throw Error(ErrorKind::ZeroProbabilityObservation,
                "observation " + model.obs_label(hypothetical_obs) + " has probability 0 under the belief");
  }
  return Categorical::normalized(std::move(post));
}

Categorical conditional_state_posterior(const GenerativeModel& model, const MarginalBeliefs& beliefs,
                                        std::size_t timestep, Index hypothetical_obs) {
  if (timestep >= beliefs.per_time.size()) throw Error(ErrorKind::DimensionMismatch, "timestep out of range");
  return conditional_state_posterior(model, beliefs.per_time[timestep], hypothetical_obs);
}

PreferencePosterior preferential_inference(const GenerativeModel& model, const History& history) {
  PreferencePosterior out;
  out.past = filter_and_smooth(model, history, Policy{});
  const std::size_t remaining = model.horizon - history.time();
  const auto states = state_preferences(model);
  const auto observations = predictive_observation(model, states);
  out.future_states.assign(remaining, states);
  out.future_observations.assign(remaining, observations);
  return out;
}

}  // namespace aif
