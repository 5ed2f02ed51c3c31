#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aif/categorical.hpp"

namespace aif {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Unnormalized log-preferences. Observation preferences are i.i.d. over
/// time; state preferences are derived from them through the likelihood.
struct LogPreferences {
  std::vector<double> obs_log_pref;
  std::optional<std::vector<double>> state_log_pref;
};

/// Human-readable names, used for reporting only. Empty tables are allowed.
struct LabelTables {
  std::vector<std::string> states;
  std::vector<std::string> observations;
  std::vector<std::string> actions;
};

/// Prediction model (a POMDP) and preference model (an HMM) that share one
/// likelihood. Treat as immutable once validated.
struct GenerativeModel {
  std::size_t n_states = 0;
  std::size_t n_obs = 0;
  std::size_t n_actions = 0;
  Matrix likelihood;                // n_obs x n_states; (o, s) = P(o | s)
  std::vector<Matrix> transitions;  // per action, n_states x n_states; (s', s) = P(s' | s, a)
  std::vector<double> initial_belief;
  LogPreferences preferences;
  std::size_t horizon = 1;
  LabelTables labels;

  std::string state_label(Index s) const;
  std::string obs_label(Index o) const;
  std::string action_label(Index a) const;
};

enum class ViolationKind { NotStochastic, NegativeEntry, DimensionMismatch, NonFiniteEntry };

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string tensor;         // e.g. "likelihood", "transitions"
  std::vector<Index> index;   // position of the offending column/slice/entry
  std::string rule;

  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

inline constexpr double kStochasticTolerance = 1e-9;

ValidationReport validate_model(const GenerativeModel& model);

/// Throws Error(InvalidModel) carrying the report when validation fails.
void require_valid(const GenerativeModel& model);

/// Observations o_0..o_t and the actions a_1..a_t that led to them.
struct History {
  std::vector<Index> observations;
  std::vector<Index> actions;

  /// Current decision time t.
  std::size_t time() const { return observations.empty() ? 0 : observations.size() - 1; }
};

/// A candidate sequence of future actions a_{t+1}..a_T.
struct Policy {
  std::vector<Index> actions;

  bool operator==(const Policy&) const = default;
};

/// Throws Error(InvalidHistory) if the history does not fit the model.
void check_history(const GenerativeModel& model, const History& history);

/// state_log_pref[s] = sum_o P(o|s) * obs_log_pref[o].
std::vector<double> pulled_back_log_preferences(const GenerativeModel& model);

/// Normalized preference over states, proportional to exp(state_log_pref).
Categorical state_preferences(const GenerativeModel& model);

/// Computes the state preference, stores the log form in the model and
/// returns the normalized distribution.
Categorical pullback_preferences(GenerativeModel& model);

/// Observation marginal of the preference model: likelihood applied to
/// the state preference.
Categorical preferred_observations(const GenerativeModel& model);

/// Entropy of each likelihood column, H[P(o | s)].
std::vector<double> likelihood_entropies(const GenerativeModel& model);

}  // namespace aif
