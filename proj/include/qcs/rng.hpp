#pragma once

#include <cstdint>
#include <string_view>

namespace qcs {

/// Counter-based generator: the i-th 64-bit draw is the SplitMix64
/// finalizer applied to key + (i + 1) * 0x9E3779B97F4A7C15.
///
/// Normals come from the Box-Muller transform on consecutive pairs of
/// uniforms (u1 in (0, 1], u2 in [0, 1)); the cosine branch is returned
/// first, the sine branch second.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// [0, 1) with 53 random bits.
  double uniform();
  /// (0, 1].
  double uniform_open_low();
  double normal();
  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t bounded(std::uint64_t bound);

  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t z);

/// First 8 bytes (big-endian) of SHA-256 over "<parent>|<label>|<index>".
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index = 0);

}  // namespace qcs
