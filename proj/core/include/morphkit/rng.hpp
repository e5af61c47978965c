#pragma once

#include <cstdint>
#include <string_view>

namespace morphkit {

/// One SplitMix64 step from state x (Steele, Lea & Flood 2014): add the
/// increment 0x9E3779B97F4A7C15, then mix with multipliers 0xBF58476D1CE4E5B9
/// and 0x94D049BB133111EB and shifts 30/27/31.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// FNV-1a 64-bit hash, used to turn string ids into RNG keys.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Derive a stream key from a parent key and a sub-stream tag.
std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag) noexcept;
std::uint64_t derive_key(std::uint64_t parent, std::string_view tag) noexcept;

/// Counter-based generator: draw i is splitmix64(key + (i + 1) * golden).
/// Any draw can be recomputed from (key, i), so streams keyed by
/// (run seed, item id) are independent of scheduling order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one variate per two uniforms).
  double normal() noexcept;
  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace morphkit
