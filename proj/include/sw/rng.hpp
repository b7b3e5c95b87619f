#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sw {

/// Counter-based pseudo-random generator (SplitMix64).
///
/// The i-th output is a pure function of (seed, i):
///   state_i = seed + i * 0x9E3779B97F4A7C15
///   out_i   = mix(state_i)
/// where mix is the SplitMix64 finalizer. Identical seeds therefore produce
/// identical streams on every platform, and independent substreams can be
/// derived without consuming values from the parent.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t counter() const { return counter_; }
  void set_counter(uint64_t c) { counter_ = c; }

  uint64_t next_u64() {
    uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller. Consumes two raw values per call.
  double normal() {
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// ±1 with equal probability.
  double sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

  /// Independent substream; does not advance this generator.
  Rng derive(uint64_t stream) const {
    uint64_t z = seed_ ^ (stream + 0x9E3779B97F4A7C15ULL) * 0xD1B54A32D192ED03ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace sw
