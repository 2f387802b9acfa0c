#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vorder {

// Deterministic random source used by every stochastic component.
//
// The raw stream is std::mt19937_64, whose output is fully specified by the
// C++ standard, so the same seed yields the same bytes on every platform.
// Distributions are implemented here explicitly (rejection sampling,
// Box-Muller) because the standard <random> distributions are
// implementation-defined and would break cross-platform reproducibility.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased uniform integer in [0, bound) via rejection sampling.
  std::uint64_t below(std::uint64_t bound) {
    // threshold = 2^64 mod bound; values under it would bias the modulus.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(6.28318530717958647692 * u2);
    have_spare_ = true;
    return mag * std::cos(6.28318530717958647692 * u2);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vorder
