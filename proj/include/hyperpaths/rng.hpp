#pragma once

#include <cmath>
#include <cstdint>

namespace hyperpaths {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// Maps a 64-bit word to a double strictly inside (0, 1) using the top 52
/// bits; the result is an odd multiple of 2^-53, so to_unit_open(~b) equals
/// 1 - to_unit_open(b) exactly.
constexpr double to_unit_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Counter-based uniform stream: the i-th draw is a pure function of
/// (seed, stream, i), so any evaluation order reproduces the same values.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix64(mix64(seed ^ 0x6A09E667F3BCC908ULL) + stream * 0x9E3779B97F4A7C15ULL)) {}

  std::uint64_t next_u64() noexcept {
    return mix64(key_ ^ mix64(counter_++ + 0xA0761D6478BD642FULL));
  }

  /// Uniform on (0, 1).
  double uniform() noexcept { return to_unit_open(next_u64()); }

  /// Exp(1) by inversion.
  double exponential() noexcept { return -std::log(uniform()); }

  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hyperpaths
