#include "aif/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aif {

namespace {

double total_mass(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum;
}

}  // namespace

Categorical::Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!std::isfinite(probs_[i]) || probs_[i] < 0.0) {
      throw std::invalid_argument("categorical entry " + std::to_string(i) +
                                  " is negative or non-finite");
    }
  }
  if (std::abs(total_mass(probs_) - 1.0) > kNormTolerance) {
    throw std::invalid_argument("categorical does not sum to 1");
  }
}

Categorical Categorical::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("cannot normalize negative or non-finite weight");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("cannot normalize zero mass");
  for (double& w : weights) w /= sum;
  return Categorical(std::move(weights));
}

Categorical Categorical::from_log_weights(std::span<const double> log_weights) {
  const double lse = log_sum_exp(log_weights);
  if (!std::isfinite(lse)) throw std::invalid_argument("log-weights have no finite mass");
  std::vector<double> p(log_weights.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_weights[i] - lse);
  return normalized(std::move(p));
}

Categorical Categorical::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform over empty set");
  return Categorical(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Categorical Categorical::dirac(std::size_t n, Index at) {
  if (at >= n) throw std::out_of_range("dirac index out of range");
  std::vector<double> p(n, 0.0);
  p[at] = 1.0;
  return Categorical(std::move(p));
}

Index Categorical::argmax() const {
  if (probs_.empty()) throw std::logic_error("argmax of empty categorical");
  // max_element returns the first maximum, which is the lowest index.
  return static_cast<Index>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

double log_sum_exp(std::span<const double> values) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

double kl_divergence(std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size()) throw std::invalid_argument("kl_divergence: size mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    if (p[i] <= 0.0) return std::numeric_limits<double>::infinity();
    kl += q[i] * (std::log(q[i]) - std::log(p[i]));
  }
  return kl;
}

}  // namespace aif
