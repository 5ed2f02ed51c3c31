#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "aif/model.hpp"

namespace aif::testing {

struct RandomModelLimits {
  std::size_t max_states = 6;
  std::size_t max_obs = 6;
  std::size_t max_actions = 3;
  std::size_t max_horizon = 4;
  double zero_prob = 0.15;  // chance that an entry is forced to zero
};

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n, double zero_prob) {
  std::gamma_distribution<double> g(0.7, 1.0);
  std::bernoulli_distribution zero(zero_prob);
  std::vector<double> v(n);
  double sum = 0.0;
  for (auto& x : v) {
    x = zero(rng) ? 0.0 : g(rng);
    sum += x;
  }
  if (sum <= 0.0) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    v[pick(rng)] = 1.0;
    return v;
  }
  for (auto& x : v) x /= sum;
  return v;
}

inline GenerativeModel random_model(std::uint64_t seed, const RandomModelLimits& lim = {}) {
  std::mt19937_64 rng(seed);
  auto draw = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  GenerativeModel m;
  m.n_states = draw(1, lim.max_states);
  m.n_obs = draw(1, lim.max_obs);
  m.n_actions = draw(1, lim.max_actions);
  m.horizon = draw(1, lim.max_horizon);
  m.likelihood = Matrix(m.n_obs, m.n_states);
  for (std::size_t s = 0; s < m.n_states; ++s) {
    const auto col = random_simplex(rng, m.n_obs, lim.zero_prob);
    for (std::size_t o = 0; o < m.n_obs; ++o) m.likelihood(o, s) = col[o];
  }
  for (std::size_t a = 0; a < m.n_actions; ++a) {
    Matrix b(m.n_states, m.n_states);
    for (std::size_t s = 0; s < m.n_states; ++s) {
      const auto col = random_simplex(rng, m.n_states, lim.zero_prob);
      for (std::size_t s2 = 0; s2 < m.n_states; ++s2) b(s2, s) = col[s2];
    }
    m.transitions.push_back(std::move(b));
  }
  m.initial_belief = random_simplex(rng, m.n_states, lim.zero_prob);
  std::normal_distribution<double> pref(0.0, 2.0);
  m.preferences.obs_log_pref.resize(m.n_obs);
  for (auto& c : m.preferences.obs_log_pref) c = pref(rng);
  pullback_preferences(m);
  return m;
}

inline Index sample_index(std::mt19937_64& rng, const std::vector<double>& p) {
  return static_cast<Index>(std::discrete_distribution<std::size_t>(p.begin(), p.end())(rng));
}

/// Simulates the model itself under random actions up to time t, so the
/// resulting history always has positive probability.
inline History sample_history(const GenerativeModel& m, std::size_t t, std::mt19937_64& rng) {
  History h;
  auto column = [&](const Matrix& mat, Index c) {
    std::vector<double> v(mat.rows());
    for (std::size_t r = 0; r < mat.rows(); ++r) v[r] = mat(r, c);
    return v;
  };
  Index s = sample_index(rng, m.initial_belief);
  h.observations.push_back(sample_index(rng, column(m.likelihood, s)));
  for (std::size_t k = 0; k < t; ++k) {
    const Index a = std::uniform_int_distribution<Index>(0, m.n_actions - 1)(rng);
    s = sample_index(rng, column(m.transitions[a], s));
    h.actions.push_back(a);
    h.observations.push_back(sample_index(rng, column(m.likelihood, s)));
  }
  return h;
}

inline Policy random_policy(const GenerativeModel& m, std::size_t t, std::mt19937_64& rng) {
  Policy p;
  for (std::size_t k = t; k < m.horizon; ++k) {
    p.actions.push_back(std::uniform_int_distribution<Index>(0, m.n_actions - 1)(rng));
  }
  return p;
}

}  // namespace aif::testing
