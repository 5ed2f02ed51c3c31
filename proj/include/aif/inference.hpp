#pragma once

#include <cstddef>
#include <vector>

#include "aif/categorical.hpp"
#include "aif/model.hpp"

namespace aif {

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

/// Per-timestep marginals over hidden states, indexed from timestep 0.
struct MarginalBeliefs {
  std::vector<Categorical> per_time;
};

/// Exact posterior over complete state sequences. The support is every
/// sequence of the given length in lexicographic order (timestep 0 most
/// significant), so only the probabilities are stored.
class StateTrajectoryPosterior {
 public:
  StateTrajectoryPosterior(std::size_t n_states, std::size_t length, Categorical probs);

  std::size_t n_states() const noexcept { return n_states_; }
  std::size_t length() const noexcept { return length_; }
  std::size_t size() const noexcept { return probs_.size(); }
  const Categorical& probs() const noexcept { return probs_; }

  std::vector<Index> trajectory(std::size_t i) const;
  MarginalBeliefs marginals() const;

 private:
  std::size_t n_states_;
  std::size_t length_;
  Categorical probs_;
};

/// Preferences given the history: filtered/smoothed beliefs over the
/// observed prefix, and i.i.d. preference marginals for t+1..T.
struct PreferencePosterior {
  MarginalBeliefs past;
  std::vector<Categorical> future_states;
  std::vector<Categorical> future_observations;
};

/// Brute-force posterior over all |S|^(L) state sequences, L = t + |policy| + 1.
/// Throws Error(HorizonOverflow) when |S|^L exceeds `cap`.
StateTrajectoryPosterior enumerate_posterior(const GenerativeModel& model, const History& history,
                                             const Policy& policy,
                                             std::size_t cap = kDefaultEnumerationCap);

/// Forward-backward in log space over timesteps 0..t+|policy|. Timesteps
/// after t carry no observation, so their marginals are predictive.
/// Throws Error(ZeroEvidence) if the observed history has probability 0.
MarginalBeliefs filter_and_smooth(const GenerativeModel& model, const History& history,
                                  const Policy& policy);

/// P(o_tau) = sum_s P(o|s) q_tau(s), for every timestep of `beliefs`.
std::vector<Categorical> predictive_observations(const GenerativeModel& model,
                                                 const MarginalBeliefs& beliefs);

Categorical predictive_observation(const GenerativeModel& model, const Categorical& state_belief);

/// Bayes update of the state marginal at `timestep` by a hypothetical
/// observation. Throws Error(ZeroProbabilityObservation).
Categorical conditional_state_posterior(const GenerativeModel& model, const MarginalBeliefs& beliefs,
                                        std::size_t timestep, Index hypothetical_obs);

Categorical conditional_state_posterior(const GenerativeModel& model, const Categorical& state_belief,
                                        Index hypothetical_obs);

PreferencePosterior preferential_inference(const GenerativeModel& model, const History& history);

}  // namespace aif
