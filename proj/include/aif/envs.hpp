#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aif/categorical.hpp"
#include "aif/model.hpp"
#include "aif/rng.hpp"

namespace aif {

struct StepResult {
  Index observation = 0;
  bool done = false;
};

/// An external process the agent samples through observations. One owner
/// per instance; parallel trials use separate instances.
class Environment {
 public:
  virtual ~Environment() = default;

  /// Starts a trial and returns the observation at timestep 0.
  virtual Index reset(std::uint64_t seed) = 0;
  /// Throws Error(StepAfterDone) once the trial has ended.
  virtual StepResult step(Index action) = 0;
  virtual bool done() const = 0;
  /// Hidden state, for logging only.
  virtual Index ground_truth() const = 0;
  /// Score of the trajectory so far.
  virtual double score() const = 0;
  virtual std::string context_label() const = 0;
};

namespace tmaze {

enum Location : Index { Middle = 0, TopLeft = 1, TopRight = 2, Bottom = 3 };
enum Context : Index { RewardLeft = 0, RewardRight = 1 };
enum Observation : Index {
  MiddleNull = 0,
  LeftReward = 1,
  LeftPunish = 2,
  RightReward = 3,
  RightPunish = 4,
  CueBlack = 5,
  CueWhite = 6,
};

inline constexpr std::size_t kLocations = 4;
inline constexpr std::size_t kContexts = 2;
inline constexpr std::size_t kStates = kLocations * kContexts;
inline constexpr std::size_t kObservations = 7;
inline constexpr std::size_t kActions = 4;  // action a moves to location a
inline constexpr std::size_t kHorizon = 2;

constexpr Index state_index(Location loc, Context ctx) { return static_cast<Index>(loc) * kContexts + ctx; }
constexpr Location location_of(Index state) { return static_cast<Location>(state / kContexts); }
constexpr Context context_of(Index state) { return static_cast<Context>(state % kContexts); }

struct Params {
  /// Log-preference of a reward observation; punishment gets the negative.
  double preference_magnitude = 6.0;
  /// Away from the cue arm, probability that the colour channel shows a
  /// random colour (black or white, equally) instead of the location's
  /// usual observation. 0 gives a fully deterministic likelihood, under
  /// which every open-loop policy has the same expected free energy.
  double stray_cue_prob = 0.2;
  double reward_direct = 10.0;
  double reward_after_cue = 5.0;
  double punishment = -10.0;
};

/// Throws Error(Config) for out-of-range parameters.
void check_params(const Params& params);

GenerativeModel tmaze_model(const Params& params = {});

/// Observation log-preferences reused as the per-observation reward of the
/// reward-maximizing agents.
std::vector<double> reward_vector(const Params& params = {});

/// Location reached from `loc` by `action`; the top arms are absorbing.
Location next_location(Location loc, Index action);

/// Emission distribution of a state, written out by rule.
std::vector<double> emission(const Params& params, Index state);

/// Score of a (possibly partial) trajectory of hidden states s_0..s_k:
/// punishment if the punishment arm is ever entered, the direct reward for
/// reaching the reward arm at t=1, the cue reward for reaching it at t=2
/// straight from the cue arm, otherwise 0. Throws Error(MalformedTrajectory)
/// for trajectories that are empty, too long, do not start in the middle,
/// switch context, or break the movement rules.
double score_trajectory(const Params& params, std::span<const Index> states);

/// Ground-truth T-Maze process mirroring tmaze_model.
class TMazeEnv final : public Environment {
 public:
  explicit TMazeEnv(Params params = {});

  Index reset(std::uint64_t seed) override;
  StepResult step(Index action) override;
  bool done() const override { return started_ && states_.size() == kHorizon + 1; }
  Index ground_truth() const override;
  double score() const override;
  std::string context_label() const override;

  const std::vector<Index>& states() const noexcept { return states_; }
  Context context() const;

 private:
  Index emit(Index state);

  Params params_;
  Substream rng_{0};
  std::vector<Index> states_;
  bool started_ = false;
};

std::string context_name(Context ctx);

}  // namespace tmaze

}  // namespace aif
