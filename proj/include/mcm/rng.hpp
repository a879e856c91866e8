#pragma once

#include <cstdint>
#include <random>

namespace mcm {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seedable 64-bit generator with deterministic child streams, so that
/// per-trial streams are reproducible independent of execution order.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  /// Stream for trial `index`, independent of draws made on the parent.
  Rng child(uint64_t index) const {
    return Rng(seed_ ^ splitmix64(index + 0x51ed2701ULL));
  }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound), bound > 0.
  uint64_t next_below(uint64_t bound) {
    std::uniform_int_distribution<uint64_t> d(0, bound - 1);
    return d(engine_);
  }

  bool next_bool() { return (next_u64() >> 63) != 0; }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_gaussian() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(engine_);
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mcm
