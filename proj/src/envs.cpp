#include "aif/envs.hpp"

#include <cmath>

#include "aif/errors.hpp"

namespace aif::tmaze {

namespace {

const char* const kLocationNames[kLocations] = {"middle", "top-left", "top-right", "bottom"};
const char* const kContextNames[kContexts] = {"reward-left", "reward-right"};
const char* const kObservationNames[kObservations] = {
    "middle-null", "left-reward", "left-punish", "right-reward", "right-punish", "cue-black", "cue-white"};
const char* const kActionNames[kActions] = {"go-middle", "go-top-left", "go-top-right", "go-bottom"};

Location reward_arm(Context ctx) { return ctx == RewardLeft ? TopLeft : TopRight; }
Location punishment_arm(Context ctx) { return ctx == RewardLeft ? TopRight : TopLeft; }

// Observation a location shows when no stray cue appears.
Observation usual_observation(Location loc, Context ctx) {
  switch (loc) {
    case Middle: return MiddleNull;
    case TopLeft: return ctx == RewardLeft ? LeftReward : LeftPunish;
    case TopRight: return ctx == RewardRight ? RightReward : RightPunish;
    case Bottom: return ctx == RewardLeft ? CueBlack : CueWhite;
  }
  return MiddleNull;
}

}  // namespace

std::string context_name(Context ctx) { return kContextNames[ctx]; }

void check_params(const Params& p) {
  if (!(p.stray_cue_prob >= 0.0 && p.stray_cue_prob < 1.0)) {
    throw Error(ErrorKind::Config, "stray_cue_prob must lie in [0, 1)");
  }
  for (double v : {p.preference_magnitude, p.reward_direct, p.reward_after_cue, p.punishment}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Config, "T-Maze parameters must be finite");
  }
}

Location next_location(Location loc, Index action) {
  if (action >= kActions) throw Error(ErrorKind::DimensionMismatch, "T-Maze action out of range");
  if (loc == TopLeft || loc == TopRight) return loc;
  return static_cast<Location>(action);
}

std::vector<double> emission(const Params& params, Index state) {
  std::vector<double> p(kObservations, 0.0);
  const Location loc = location_of(state);
  const Context ctx = context_of(state);
  if (loc == Bottom) {
    p[usual_observation(loc, ctx)] = 1.0;
    return p;
  }
  const double stray = params.stray_cue_prob;
  p[usual_observation(loc, ctx)] += 1.0 - stray;
  p[CueBlack] += 0.5 * stray;
  p[CueWhite] += 0.5 * stray;
  return p;
}

GenerativeModel tmaze_model(const Params& params) {
  check_params(params);
  GenerativeModel m;
  m.n_states = kStates;
  m.n_obs = kObservations;
  m.n_actions = kActions;
  m.horizon = kHorizon;

  m.likelihood = Matrix(kObservations, kStates);
  for (Index s = 0; s < kStates; ++s) {
    const auto column = emission(params, s);
    for (Index o = 0; o < kObservations; ++o) m.likelihood(o, s) = column[o];
  }

  for (Index a = 0; a < kActions; ++a) {
    Matrix b(kStates, kStates);
    for (Index s = 0; s < kStates; ++s) {
      b(state_index(next_location(location_of(s), a), context_of(s)), s) = 1.0;
    }
    m.transitions.push_back(std::move(b));
  }

  m.initial_belief.assign(kStates, 0.0);
  m.initial_belief[state_index(Middle, RewardLeft)] = 0.5;
  m.initial_belief[state_index(Middle, RewardRight)] = 0.5;
  m.preferences.obs_log_pref = reward_vector(params);

  for (Index s = 0; s < kStates; ++s) {
    m.labels.states.push_back(std::string(kLocationNames[location_of(s)]) + "/" + kContextNames[context_of(s)]);
  }
  m.labels.observations.assign(std::begin(kObservationNames), std::end(kObservationNames));
  m.labels.actions.assign(std::begin(kActionNames), std::end(kActionNames));
  pullback_preferences(m);
  return m;
}

std::vector<double> reward_vector(const Params& params) {
  const double c = params.preference_magnitude;
  return {0.0, c, -c, c, -c, 0.0, 0.0};
}

double score_trajectory(const Params& params, std::span<const Index> states) {
  if (states.empty() || states.size() > kHorizon + 1) {
    throw Error(ErrorKind::MalformedTrajectory, "trajectory must hold 1 to 3 states");
  }
  for (Index s : states) {
    if (s >= kStates) throw Error(ErrorKind::MalformedTrajectory, "state index out of range");
  }
  const Context ctx = context_of(states[0]);
  if (location_of(states[0]) != Middle) throw Error(ErrorKind::MalformedTrajectory, "trials start in the middle");
  for (std::size_t k = 1; k < states.size(); ++k) {
    if (context_of(states[k]) != ctx) throw Error(ErrorKind::MalformedTrajectory, "context changed mid-trial");
    const Location prev = location_of(states[k - 1]);
    const Location cur = location_of(states[k]);
    if ((prev == TopLeft || prev == TopRight) && cur != prev) {
      throw Error(ErrorKind::MalformedTrajectory, "left an absorbing arm");
    }
  }
  for (Index s : states) {
    if (location_of(s) == punishment_arm(ctx)) return params.punishment;
  }
  if (states.size() > 1 && location_of(states[1]) == reward_arm(ctx)) return params.reward_direct;
  if (states.size() > 2 && location_of(states[1]) == Bottom && location_of(states[2]) == reward_arm(ctx)) {
    return params.reward_after_cue;
  }
  return 0.0;
}

TMazeEnv::TMazeEnv(Params params) : params_(params) { check_params(params_); }

Index TMazeEnv::emit(Index state) {
  const auto p = emission(params_, state);
  const double u = rng_.uniform();
  double cumulative = 0.0;
  Index last = 0;
  for (Index o = 0; o < p.size(); ++o) {
    if (p[o] <= 0.0) continue;
    last = o;
    cumulative += p[o];
    if (u < cumulative) return o;
  }
  return last;
}

Index TMazeEnv::reset(std::uint64_t seed) {
  rng_ = Substream(seed);
  const Context ctx = rng_.uniform() < 0.5 ? RewardLeft : RewardRight;
  states_.assign(1, state_index(Middle, ctx));
  started_ = true;
  return emit(states_.back());
}

StepResult TMazeEnv::step(Index action) {
  if (!started_) throw Error(ErrorKind::StepAfterDone, "environment has not been reset");
  if (done()) throw Error(ErrorKind::StepAfterDone, "trial already finished");
  const Index s = states_.back();
  const Index next = state_index(next_location(location_of(s), action), context_of(s));
  states_.push_back(next);
  return {emit(next), done()};
}

Index TMazeEnv::ground_truth() const {
  if (!started_) throw Error(ErrorKind::StepAfterDone, "environment has not been reset");
  return states_.back();
}

Context TMazeEnv::context() const { return context_of(ground_truth()); }

double TMazeEnv::score() const { return score_trajectory(params_, states_); }

std::string TMazeEnv::context_label() const { return context_name(context()); }

}  // namespace aif::tmaze
