#pragma once

#include <cstdint>

namespace captchalab::imgcore {

// SplitMix64. Every random choice in the project goes through this type so a
// seed fully determines generated images, models and challenges on any
// platform.
class Rng {
 public:
  constexpr explicit Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  constexpr double next_float() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // floor(next_float() * bound); bound == 0 yields 0.
  constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(next_float() * static_cast<double>(bound));
  }

  // Uniform integer in [lo, hi], both inclusive. Consumes one draw.
  constexpr int uniform_int(int lo, int hi) noexcept {
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

  friend constexpr bool operator==(const Rng&, const Rng&) = default;

 private:
  std::uint64_t state_;
};

}  // namespace captchalab::imgcore
