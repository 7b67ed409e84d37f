#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace poswise {

/// Reproducible random source.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// The distributions are implemented here rather than taken from <random>,
/// whose algorithms are implementation-defined:
///   uniform   53 high bits of one draw scaled by 2^-53, in [0, 1)
///   normal    Marsaglia polar method; the second value of each accepted
///             pair is cached and returned by the next call
///   index     rejection sampling on the 64-bit output (no modulo bias)
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double standard_normal();
  double normal(double mu, double sigma) { return mu + sigma * standard_normal(); }
  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t uniform_index(std::size_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace poswise
