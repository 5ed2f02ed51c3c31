#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aif {

using Index = std::size_t;

inline constexpr double kNormTolerance = 1e-12;

/// Distribution over a finite set of outcomes. The constructor enforces
/// non-negativity and unit mass within kNormTolerance.
class Categorical {
 public:
  Categorical() = default;
  explicit Categorical(std::vector<double> probs);

  /// Rescales non-negative weights to unit mass. Throws on zero or
  /// non-finite total.
  static Categorical normalized(std::vector<double> weights);
  /// Softmax of log-weights; -inf entries get probability 0.
  static Categorical from_log_weights(std::span<const double> log_weights);
  static Categorical uniform(std::size_t n);
  static Categorical dirac(std::size_t n, Index at);

  std::size_t size() const noexcept { return probs_.size(); }
  bool empty() const noexcept { return probs_.empty(); }
  double operator[](Index i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }
  auto begin() const noexcept { return probs_.begin(); }
  auto end() const noexcept { return probs_.end(); }

  /// Lowest index attaining the maximum probability.
  Index argmax() const;

 private:
  std::vector<double> probs_;
};

double log_sum_exp(std::span<const double> values);

/// Shannon entropy in nats, with 0 log 0 = 0.
double entropy(std::span<const double> p);

/// KL[q || p] in nats. Returns +inf when q puts mass where p has none.
double kl_divergence(std::span<const double> q, std::span<const double> p);

}  // namespace aif
