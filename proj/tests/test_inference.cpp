#include <cmath>

#include "aif/envs.hpp"
#include "aif/inference.hpp"
#include "doctest.h"
#include "random_models.hpp"
#include "test_util.hpp"

using namespace aif;
using namespace aif::testing;

namespace {

// Independent joint-table normalization over all 3^4 trajectories of a
// 3-state model with T = 3.
std::vector<double> hand_coded_posterior(const GenerativeModel& m, const History& h, const Policy& pi) {
  std::vector<Index> actions = h.actions;
  actions.insert(actions.end(), pi.actions.begin(), pi.actions.end());
  std::vector<double> joint;
  double z = 0.0;
  for (Index s0 = 0; s0 < 3; ++s0)
    for (Index s1 = 0; s1 < 3; ++s1)
      for (Index s2 = 0; s2 < 3; ++s2)
        for (Index s3 = 0; s3 < 3; ++s3) {
          const Index s[4] = {s0, s1, s2, s3};
          double p = m.initial_belief[s0];
          for (int k = 1; k < 4; ++k) p *= m.transitions[actions[k - 1]](s[k], s[k - 1]);
          for (std::size_t k = 0; k < h.observations.size(); ++k) p *= m.likelihood(h.observations[k], s[k]);
          joint.push_back(p);
          z += p;
        }
  for (auto& p : joint) p /= z;
  return joint;
}

GenerativeModel small_random_model(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GenerativeModel m;
  m.n_states = 3;
  m.n_obs = 2;
  m.n_actions = 2;
  m.horizon = 3;
  m.likelihood = Matrix(2, 3);
  for (Index s = 0; s < 3; ++s) {
    const auto c = random_simplex(rng, 2, 0.0);
    m.likelihood(0, s) = c[0];
    m.likelihood(1, s) = c[1];
  }
  for (int a = 0; a < 2; ++a) {
    Matrix b(3, 3);
    for (Index s = 0; s < 3; ++s) {
      const auto c = random_simplex(rng, 3, 0.0);
      for (Index s2 = 0; s2 < 3; ++s2) b(s2, s) = c[s2];
    }
    m.transitions.push_back(b);
  }
  m.initial_belief = random_simplex(rng, 3, 0.0);
  m.preferences.obs_log_pref = {1.0, -1.0};
  pullback_preferences(m);
  return m;
}

void check_normalized(const Categorical& c) {
  double s = 0.0;
  for (double p : c) {
    CHECK(p >= 0.0);
    s += p;
  }
  CHECK(std::abs(s - 1.0) <= 1e-10);
}

}  // namespace

TEST_CASE("enumerate_posterior matches a hand-coded joint table on 81 trajectories") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = small_random_model(seed);
    std::mt19937_64 rng(seed * 7);
    for (std::size_t t = 0; t <= m.horizon; ++t) {
      const auto h = sample_history(m, t, rng);
      const auto pi = random_policy(m, t, rng);
      const auto post = enumerate_posterior(m, h, pi);
      const auto oracle = hand_coded_posterior(m, h, pi);
      REQUIRE(post.size() == 81);
      for (std::size_t i = 0; i < 81; ++i) CHECK(std::abs(post.probs()[i] - oracle[i]) <= 1e-14);
      CHECK(post.trajectory(5) == std::vector<Index>{0, 0, 1, 2});
    }
  }
}

TEST_CASE("enumerate_posterior on deterministic chains is a Dirac") {
  auto m = identity_model(3, 2, 3);
  // action 1 cycles the states
  Matrix cycle(3, 3);
  for (Index s = 0; s < 3; ++s) cycle((s + 1) % 3, s) = 1.0;
  m.transitions[1] = cycle;
  m.initial_belief = {0.0, 1.0, 0.0};
  const History h{{1, 2}, {1}};
  const auto post = enumerate_posterior(m, h, Policy{{0, 1}});
  const Index forced = post.probs().argmax();
  CHECK(post.probs()[forced] == 1.0);
  CHECK(post.trajectory(forced) == std::vector<Index>{1, 2, 2, 0});
}

TEST_CASE("enumerate_posterior with uniform everything is uniform") {
  GenerativeModel m = identity_model(2, 1, 2);
  m.likelihood = filled(2, 2, 0.5);
  m.transitions[0] = filled(2, 2, 0.5);
  const auto post = enumerate_posterior(m, History{{1}, {}}, Policy{{0, 0}});
  for (double p : post.probs()) CHECK(p == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("enumerate_posterior respects the cap") {
  const auto m = identity_model(10, 1, 4);
  CHECK(error_kind_of([&] { enumerate_posterior(m, History{{0}, {}}, Policy{{0, 0, 0, 0}}, 10'000); }) ==
        ErrorKind::HorizonOverflow);
  CHECK_FALSE(error_kind_of([&] { enumerate_posterior(m, History{{0}, {}}, Policy{{0, 0, 0, 0}}, 100'000); }));
}

TEST_CASE("filter_and_smooth agrees with enumeration on random models") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto m = random_model(seed);
    std::mt19937_64 rng(seed + 1000);
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, m.horizon)(rng);
    const auto h = sample_history(m, t, rng);
    const auto pi = random_policy(m, t, rng);
    const auto exact = enumerate_posterior(m, h, pi).marginals();
    const auto fast = filter_and_smooth(m, h, pi);
    REQUIRE(exact.per_time.size() == fast.per_time.size());
    for (std::size_t k = 0; k < fast.per_time.size(); ++k) {
      check_normalized(fast.per_time[k]);
      for (Index s = 0; s < m.n_states; ++s) CHECK(std::abs(exact.per_time[k][s] - fast.per_time[k][s]) <= 1e-10);
    }
  }
}

TEST_CASE("identity dynamics keep a Dirac prior") {
  auto m = identity_model(3, 1, 3);
  m.initial_belief = {0.0, 0.0, 1.0};
  const auto b = filter_and_smooth(m, History{{2}, {}}, Policy{{0, 0, 0}});
  REQUIRE(b.per_time.size() == 4);
  for (const auto& q : b.per_time) CHECK(std::vector<double>(q.begin(), q.end()) == m.initial_belief);
}

TEST_CASE("filter_and_smooth reports zero evidence") {
  auto m = identity_model(2, 1, 2);
  m.initial_belief = {1.0, 0.0};
  const auto kind = error_kind_of([&] { filter_and_smooth(m, History{{1}, {}}, Policy{{0, 0}}); });
  CHECK(kind == ErrorKind::ZeroEvidence);
  CHECK(error_kind_of([&] { enumerate_posterior(m, History{{1}, {}}, Policy{{0, 0}}); }) == ErrorKind::ZeroEvidence);
}

TEST_CASE("T-Maze inference") {
  using namespace aif::tmaze;
  const auto m = tmaze_model({});
  SUBCASE("the cue determines the context") {
    const History h{{MiddleNull, CueBlack}, {Bottom}};
    const auto b = filter_and_smooth(m, h, Policy{{TopLeft}});
    for (const auto& q : b.per_time) {
      double left = 0.0;
      for (Index s = 0; s < kStates; ++s) left += context_of(s) == RewardLeft ? q[s] : 0.0;
      CHECK(std::abs(left - 1.0) <= 1e-12);
    }
  }
  SUBCASE("predicted cue colours at the bottom are even") {
    const auto b = filter_and_smooth(m, History{{MiddleNull}, {}}, Policy{{Bottom, Bottom}});
    const auto po = predictive_observations(m, b);
    CHECK(po[1][CueBlack] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(po[1][CueWhite] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("a hypothetical black cue at the bottom resolves the context") {
    const auto b = filter_and_smooth(m, History{{MiddleNull}, {}}, Policy{{Bottom, Bottom}});
    const auto q = conditional_state_posterior(m, b, 1, CueBlack);
    CHECK(q[state_index(Bottom, RewardLeft)] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("preferences at t = 0 favour the reward-consistent states") {
    const auto pref = preferential_inference(m, History{{MiddleNull}, {}});
    REQUIRE(pref.past.per_time.size() == 1);
    REQUIRE(pref.future_states.size() == kHorizon);
    const auto& ps = pref.future_states[0];
    const Index best = ps.argmax();
    CHECK((best == state_index(TopLeft, RewardLeft) || best == state_index(TopRight, RewardRight)));
    CHECK(ps[state_index(TopLeft, RewardLeft)] == doctest::Approx(ps[state_index(TopRight, RewardRight)]));
    const double nu = Params{}.stray_cue_prob;
    CHECK(ps[state_index(TopLeft, RewardLeft)] / ps[state_index(Middle, RewardLeft)] ==
          doctest::Approx(std::exp(6.0 * (1.0 - nu))));
  }
}

TEST_CASE("predictive observations") {
  auto m = identity_model(3, 1, 1);
  m.likelihood(0, 1) = 0.2;
  m.likelihood(1, 1) = 0.5;
  m.likelihood(2, 1) = 0.3;
  const auto po = predictive_observation(m, Categorical::dirac(3, 1));
  CHECK(po[0] == doctest::Approx(0.2));
  CHECK(po[1] == doctest::Approx(0.5));
  CHECK(po[2] == doctest::Approx(0.3));

  m.likelihood = filled(3, 3, 1.0 / 3.0);
  const auto pu = predictive_observation(m, Categorical({0.7, 0.2, 0.1}));
  for (double p : pu) CHECK(p == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("conditional state posterior") {
  const auto m = identity_model(3, 1, 1);
  const auto q = conditional_state_posterior(m, Categorical::uniform(3), 2);
  CHECK(q[2] == 1.0);
  const auto dirac = conditional_state_posterior(m, Categorical::dirac(3, 1), 1);
  CHECK(dirac[1] == 1.0);
  CHECK(error_kind_of([&] { conditional_state_posterior(m, Categorical::dirac(3, 1), 0); }) ==
        ErrorKind::ZeroProbabilityObservation);
}

TEST_CASE("law of total probability for hypothetical observations") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = random_model(seed);
    std::mt19937_64 rng(seed);
    const auto q = Categorical::normalized(random_simplex(rng, m.n_states, 0.2));
    const auto po = predictive_observation(m, q);
    std::vector<double> mix(m.n_states, 0.0);
    for (Index o = 0; o < m.n_obs; ++o) {
      if (po[o] == 0.0) continue;
      const auto post = conditional_state_posterior(m, q, o);
      check_normalized(post);
      for (Index s = 0; s < m.n_states; ++s) mix[s] += po[o] * post[s];
    }
    for (Index s = 0; s < m.n_states; ++s) CHECK(std::abs(mix[s] - q[s]) <= 1e-10);
  }
}

TEST_CASE("preferential inference") {
  SUBCASE("future copies of the preference marginals") {
    const auto m = random_model(3);
    std::mt19937_64 rng(3);
    const auto pref = preferential_inference(m, sample_history(m, 0, rng));
    CHECK(pref.future_states.size() == m.horizon);
    CHECK(pref.future_observations.size() == m.horizon);
    const auto ps = state_preferences(m);
    for (const auto& f : pref.future_states) {
      for (Index s = 0; s < m.n_states; ++s) CHECK(f[s] == ps[s]);
    }
    for (const auto& f : pref.future_observations) check_normalized(f);
  }
  SUBCASE("identity likelihood with flat preferences") {
    auto m = identity_model(4, 1, 2);
    pullback_preferences(m);
    const auto pref = preferential_inference(m, History{{1}, {}});
    for (double p : pref.future_states[0]) CHECK(p == doctest::Approx(0.25));
    CHECK(pref.past.per_time[0][1] == 1.0);
  }
}
