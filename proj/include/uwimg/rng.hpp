#pragma once

#include <cstdint>

namespace uwimg {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic uniform stream. Unlike std::uniform_real_distribution the
// output is pinned by this code alone, so (seed, stream) pairs reproduce
// bit-identical values on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) { warm_up(); }

  Rng(uint64_t seed, uint64_t stream) : state_(seed) {
    uint64_t s = stream;
    state_ ^= splitmix64(s) ^ 0xA5A5A5A5DEADBEEFull;
    warm_up();
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n must be positive.
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
  }

 private:
  void warm_up() {
    next_u64();
    next_u64();
  }

  uint64_t state_;
};

}  // namespace uwimg
