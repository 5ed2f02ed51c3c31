#pragma once

#include <cstdint>
#include <random>

namespace aif {

/// Stateless mix of a parent seed and a stream index (splitmix64 finalizer),
/// so substreams can be derived in any order or in parallel.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

/// Independent random stream. Draws are defined bit-for-bit by the engine
/// output, not by library-specific distributions.
class Substream {
 public:
  explicit Substream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// A fresh stream derived from this stream's seed (not its state).
  Substream child(std::uint64_t index) const { return Substream(derive_seed(seed_, index)); }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace aif
