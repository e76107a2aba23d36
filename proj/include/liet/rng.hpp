#pragma once

#include <cstdint>

namespace liet {

// Deterministic PRNG (splitmix64). The standard library distributions are
// not bit-portable across implementations, so every random draw in the
// project goes through this type.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    uint64_t threshold = (~n + 1) % n;  // = 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

  // Uniform double in [0, 1).
  double real() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

  // Uniform double in [lo, hi).
  double real(double lo, double hi) { return lo + (hi - lo) * real(); }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

// Derive an independent stream from a base seed and a stream label.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  Rng r(base ^ (0x517cc1b727220a95ull * (stream + 1)));
  return r.next();
}

}  // namespace liet
