#include "aif/model.hpp"

#include <cmath>
#include <sstream>

#include "aif/errors.hpp"

namespace aif {

namespace {

std::string label_or_index(const std::vector<std::string>& table, Index i, const char* prefix) {
  if (i < table.size()) return table[i];
  return std::string(prefix) + std::to_string(i);
}

class Validator {
 public:
  explicit Validator(ValidationReport& report) : report_(report) {}

  void add(ViolationKind kind, std::string tensor, std::vector<Index> index, std::string rule) {
    report_.violations.push_back({kind, std::move(tensor), std::move(index), std::move(rule)});
  }

  // Entries and column sums of a column-stochastic matrix. `prefix` is
  // prepended to every reported index.
  void check_columns(const std::string& tensor, const Matrix& m, const std::vector<Index>& prefix) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double sum = 0.0;
      bool entries_ok = true;
      for (std::size_t r = 0; r < m.rows(); ++r) {
        const double v = m(r, c);
        auto idx = prefix;
        idx.push_back(r);
        idx.push_back(c);
        if (!std::isfinite(v)) {
          add(ViolationKind::NonFiniteEntry, tensor, idx, "entries must be finite");
          entries_ok = false;
        } else if (v < 0.0) {
          add(ViolationKind::NegativeEntry, tensor, idx, "entries must be non-negative");
          entries_ok = false;
        }
        sum += v;
      }
      if (entries_ok && std::abs(sum - 1.0) > kStochasticTolerance) {
        auto idx = prefix;
        idx.push_back(c);
        std::ostringstream rule;
        rule.precision(12);
        rule << "column " << c << " sums to " << sum << ", expected 1";
        add(ViolationKind::NotStochastic, tensor, idx, rule.str());
      }
    }
  }

 private:
  ValidationReport& report_;
};

}  // namespace

std::string GenerativeModel::state_label(Index s) const { return label_or_index(labels.states, s, "s"); }
std::string GenerativeModel::obs_label(Index o) const { return label_or_index(labels.observations, o, "o"); }
std::string GenerativeModel::action_label(Index a) const { return label_or_index(labels.actions, a, "a"); }

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NotStochastic: return "NotStochastic";
    case ViolationKind::NegativeEntry: return "NegativeEntry";
    case ViolationKind::DimensionMismatch: return "DimensionMismatch";
    case ViolationKind::NonFiniteEntry: return "NonFiniteEntry";
  }
  return "Unknown";
}

std::string Violation::describe() const {
  std::ostringstream out;
  out << to_string(kind) << " in " << tensor;
  if (!index.empty()) {
    out << " at [";
    for (std::size_t i = 0; i < index.size(); ++i) out << (i ? "," : "") << index[i];
    out << "]";
  }
  out << ": " << rule;
  return out.str();
}

std::string ValidationReport::to_string() const {
  if (ok()) return "Ok\n";
  std::ostringstream out;
  out << violations.size() << " violation(s)\n";
  for (const auto& v : violations) out << "  " << v.describe() << "\n";
  return out.str();
}

ValidationReport validate_model(const GenerativeModel& model) {
  ValidationReport report;
  Validator check(report);
  const auto dim = [&](const std::string& tensor, const std::string& rule) {
    check.add(ViolationKind::DimensionMismatch, tensor, {}, rule);
  };

  if (model.n_states == 0) dim("n_states", "must be positive");
  if (model.n_obs == 0) dim("n_obs", "must be positive");
  if (model.n_actions == 0) dim("n_actions", "must be positive");
  if (model.horizon < 1) dim("horizon", "must be at least 1");

  if (model.likelihood.rows() != model.n_obs || model.likelihood.cols() != model.n_states) {
    dim("likelihood", "expected " + std::to_string(model.n_obs) + "x" + std::to_string(model.n_states) +
                          ", got " + std::to_string(model.likelihood.rows()) + "x" +
                          std::to_string(model.likelihood.cols()));
  } else {
    check.check_columns("likelihood", model.likelihood, {});
  }

  if (model.transitions.size() != model.n_actions) {
    dim("transitions", "expected " + std::to_string(model.n_actions) + " action matrices, got " +
                           std::to_string(model.transitions.size()));
  }
  for (std::size_t a = 0; a < model.transitions.size(); ++a) {
    const auto& b = model.transitions[a];
    if (b.rows() != model.n_states || b.cols() != model.n_states) {
      check.add(ViolationKind::DimensionMismatch, "transitions", {a},
                "expected " + std::to_string(model.n_states) + "x" + std::to_string(model.n_states));
      continue;
    }
    check.check_columns("transitions", b, {a});
  }

  if (model.initial_belief.size() != model.n_states) {
    dim("initial_belief", "expected " + std::to_string(model.n_states) + " entries");
  } else {
    Matrix d(model.n_states, 1);
    for (std::size_t s = 0; s < model.n_states; ++s) d(s, 0) = model.initial_belief[s];
    check.check_columns("initial_belief", d, {});
  }

  const auto& c = model.preferences.obs_log_pref;
  if (c.size() != model.n_obs) {
    dim("obs_log_pref", "expected " + std::to_string(model.n_obs) + " entries");
  } else {
    for (std::size_t o = 0; o < c.size(); ++o) {
      if (!std::isfinite(c[o])) {
        check.add(ViolationKind::NonFiniteEntry, "obs_log_pref", {o}, "entries must be finite");
      }
    }
  }
  if (model.preferences.state_log_pref && model.preferences.state_log_pref->size() != model.n_states) {
    dim("state_log_pref", "expected " + std::to_string(model.n_states) + " entries");
  }

  const auto check_labels = [&](const std::vector<std::string>& table, std::size_t n, const char* name) {
    if (!table.empty() && table.size() != n) dim(name, "label table must be empty or have " + std::to_string(n) + " entries");
  };
  check_labels(model.labels.states, model.n_states, "labels.states");
  check_labels(model.labels.observations, model.n_obs, "labels.observations");
  check_labels(model.labels.actions, model.n_actions, "labels.actions");
  return report;
}

void require_valid(const GenerativeModel& model) {
  auto report = validate_model(model);
  if (!report.ok()) throw Error(ErrorKind::InvalidModel, report.to_string());
}

void check_history(const GenerativeModel& model, const History& history) {
  if (history.observations.empty()) {
    throw Error(ErrorKind::InvalidHistory, "history needs the initial observation");
  }
  if (history.actions.size() + 1 != history.observations.size()) {
    throw Error(ErrorKind::InvalidHistory, "expected one fewer action than observations");
  }
  if (history.time() > model.horizon) {
    throw Error(ErrorKind::InvalidHistory, "history extends past the horizon");
  }
  for (Index o : history.observations) {
    if (o >= model.n_obs) throw Error(ErrorKind::InvalidHistory, "observation index out of range");
  }
  for (Index a : history.actions) {
    if (a >= model.n_actions) throw Error(ErrorKind::InvalidHistory, "action index out of range");
  }
}

std::vector<double> pulled_back_log_preferences(const GenerativeModel& model) {
  std::vector<double> out(model.n_states, 0.0);
  const auto& c = model.preferences.obs_log_pref;
  for (std::size_t s = 0; s < model.n_states; ++s) {
    double acc = 0.0;
    for (std::size_t o = 0; o < model.n_obs; ++o) {
      const double a = model.likelihood(o, s);
      if (a > 0.0) acc += a * c[o];
    }
    out[s] = acc;
  }
  return out;
}

Categorical state_preferences(const GenerativeModel& model) {
  const auto log_pref = pulled_back_log_preferences(model);
  return Categorical::from_log_weights(log_pref);
}

Categorical pullback_preferences(GenerativeModel& model) {
  model.preferences.state_log_pref = pulled_back_log_preferences(model);
  return Categorical::from_log_weights(*model.preferences.state_log_pref);
}

Categorical preferred_observations(const GenerativeModel& model) {
  const auto ps = state_preferences(model);
  std::vector<double> po(model.n_obs, 0.0);
  for (std::size_t o = 0; o < model.n_obs; ++o) {
    for (std::size_t s = 0; s < model.n_states; ++s) po[o] += model.likelihood(o, s) * ps[s];
  }
  return Categorical::normalized(std::move(po));
}

std::vector<double> likelihood_entropies(const GenerativeModel& model) {
  std::vector<double> h(model.n_states, 0.0);
  std::vector<double> column(model.n_obs);
  for (std::size_t s = 0; s < model.n_states; ++s) {
    for (std::size_t o = 0; o < model.n_obs; ++o) column[o] = model.likelihood(o, s);
    h[s] = entropy(column);
  }
  return h;
}

}  // namespace aif
