#pragma once

#include "sfo/types.hpp"

#include <cstddef>
#include <cstdint>

namespace sfo {

/// Counter-based pseudo-random stream.
///
/// The n-th output is a pure function of (key, n), so a stream can be
/// reproduced from its seed alone and split into statistically independent
/// children by key derivation. Uniform and normal variates are generated
/// from the raw 64-bit output with portable formulas, so results do not
/// depend on the standard library's distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  /// Independent child stream keyed by `child`; does not advance this stream.
  RandomStream split(std::uint64_t child) const noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;
  double normal() noexcept;

  /// Uniform integer in [0, n); n must be positive.
  std::size_t index(std::size_t n) noexcept;

  Vector normal_vector(Index n);
  /// Uniformly distributed direction on the unit sphere.
  Vector unit_vector(Index n);

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  RandomStream(std::uint64_t key, std::uint64_t counter, int) noexcept
      : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace sfo
