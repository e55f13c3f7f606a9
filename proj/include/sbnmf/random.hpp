#ifndef SBNMF_RANDOM_HPP
#define SBNMF_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace sbn {

/// The single pseudorandom stream used throughout the library: a 64-bit
/// Mersenne Twister (std::mt19937_64). Uniform reals take the top 53 bits
/// of one draw, so a given seed reproduces bit-identical runs.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer on [0, n). Multiply-shift reduction; n must be > 0.
  std::size_t below(std::size_t n);

private:
  std::mt19937_64 engine_;
};

/// Seed for an independent per-task stream: seed XOR task index, pushed
/// through one generator step.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task);

}  // namespace sbn

#endif  // SBNMF_RANDOM_HPP
