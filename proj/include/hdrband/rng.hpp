#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hdrband {

//! SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

//! Child seed for an indexed sub-experiment (replication, stream, ...).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

//! Counter-based generator: every draw is a pure function of (seed, counter),
//! so draws can be produced in any order or on any thread with identical
//! results.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0xD1B54A32D192ED03ULL)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix64(key_ + counter * 0x9E3779B97F4A7C15ULL);
  }

  //! Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  //! Standard normal from the uniform pair at counters (2k, 2k + 1).
  double normal(std::uint64_t k) const {
    const double u1 = uniform(2 * k);
    const double u2 = uniform(2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace hdrband
