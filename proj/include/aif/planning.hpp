#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aif/categorical.hpp"
#include "aif/inference.hpp"
#include "aif/model.hpp"
#include "aif/rng.hpp"

namespace aif {

inline constexpr std::size_t kDefaultPolicyCap = 1'000'000;

/// Expected free energy of one policy and both of its decompositions, in
/// nats, summed over the future timesteps t+1..T.
///
///   total = risk + ambiguity
///         = -extrinsic - intrinsic + residual
///
/// risk is KL[predicted || preferred] over states, ambiguity the expected
/// likelihood entropy, extrinsic the expected log preference of predicted
/// observations, intrinsic the expected information gain about states, and
/// residual the expected KL between the predicted and preferred posteriors
/// over states given an observation (never negative).
struct EfeBreakdown {
  double total = 0.0;
  double risk = 0.0;
  double ambiguity = 0.0;
  double extrinsic = 0.0;
  double intrinsic = 0.0;
  double residual = 0.0;
};

enum class ObjectiveKind { ExpectedFreeEnergy, ExpectedReward, RewardPlusInfoGain, InfoGainOnly };

std::string_view to_string(ObjectiveKind kind);
std::optional<ObjectiveKind> parse_objective_kind(std::string_view name);

EfeBreakdown efe_breakdown(const GenerativeModel& model, const History& history, const Policy& policy);

/// Residual computed directly as sum_tau E_{q(o)} KL[q(s|o) || p(s|o)], as an
/// independent cross-check of the subtraction in efe_breakdown.
double expected_posterior_divergence(const GenerativeModel& model, const History& history,
                                     const Policy& policy);

/// EFE evaluated on the joint distribution over future state paths
/// (enumerated) instead of per-timestep marginals. Risk here also charges
/// for correlations between timesteps, so total >= the per-timestep total.
struct TrajectoryEfe {
  double total = 0.0;
  double risk = 0.0;
  double ambiguity = 0.0;
};

TrajectoryEfe trajectory_efe(const GenerativeModel& model, const History& history, const Policy& policy,
                             std::size_t enumeration_cap = kDefaultEnumerationCap);

/// All |A|^length action sequences in lexicographic order (first action
/// most significant). Throws Error(PolicySpaceOverflow) above `cap`.
std::vector<Policy> enumerate_policies(std::size_t n_actions, std::size_t length,
                                       std::size_t cap = kDefaultPolicyCap);

struct PolicyPosterior {
  std::size_t n_actions = 0;
  std::vector<Policy> policies;
  std::vector<double> scores;       // objective value to maximize (-total for EFE)
  std::vector<double> log_weights;  // gamma * score
  Categorical probs;
  std::vector<EfeBreakdown> breakdowns;
};

struct PlanningOptions {
  double gamma = 1.0;
  ObjectiveKind objective = ObjectiveKind::ExpectedFreeEnergy;
  std::vector<double> reward_per_obs;  // used by the reward objectives
  std::size_t policy_cap = kDefaultPolicyCap;
};

/// Softmax of -gamma * EFE over every remaining policy. gamma = 0 gives the
/// uniform posterior.
PolicyPosterior policy_posterior(const GenerativeModel& model, const History& history, double gamma = 1.0,
                                 std::size_t policy_cap = kDefaultPolicyCap);

/// Same enumeration, scored by any objective kind.
PolicyPosterior evaluate_policies(const GenerativeModel& model, const History& history,
                                  const PlanningOptions& options);

/// As above, against an already inferred preference posterior.
PolicyPosterior evaluate_policies(const GenerativeModel& model, const History& history,
                                  const PreferencePosterior& preferences, const PlanningOptions& options);

/// Marginal of the policy posterior over its first action.
Categorical action_marginal(const PolicyPosterior& posterior);

enum class SelectionMode { Argmax, Sample };

std::string_view to_string(SelectionMode mode);
std::optional<SelectionMode> parse_selection_mode(std::string_view name);

/// Argmax breaks ties by lowest index; Sample draws one uniform from `rng`
/// and inverts the cumulative distribution.
Index select_action(const Categorical& marginal, SelectionMode mode, Substream* rng = nullptr);

/// Score to maximize under the given objective.
double alternative_objective(const GenerativeModel& model, const History& history, const Policy& policy,
                             ObjectiveKind kind, std::span<const double> reward_per_obs);

/// Bayesian model average of the per-policy beliefs over timesteps 0..T.
MarginalBeliefs averaged_beliefs(const GenerativeModel& model, const History& history,
                                 const PolicyPosterior& posterior);

}  // namespace aif
