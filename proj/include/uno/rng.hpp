// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

namespace uno {

/// Counter-based generator (SplitMix64 finalizer over key + counter).
/// Output i is a pure function of (key, i), so a copy replays the same stream.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix(key_ + (counter_++) * kGolden); }

  /// Independent stream for a named purpose.
  CounterRng substream(std::uint64_t tag) const noexcept {
    CounterRng r(0);
    r.key_ = mix(key_ ^ mix(tag * kGolden + 0xD1B54A32D192ED03ULL));
    return r;
  }

  /// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
  std::uint64_t uniform_index(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t thresh = (0 - bound) % bound;
      while (low < thresh) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream tags, so each stage of a trial draws from its own stream.
namespace stream {
inline constexpr std::uint64_t signal = 1;
inline constexpr std::uint64_t thresholds = 2;
inline constexpr std::uint64_t rka = 3;
inline constexpr std::uint64_t noise = 4;
inline constexpr std::uint64_t model = 5;
}  // namespace stream

}  // namespace uno
