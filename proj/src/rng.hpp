// splitmix64: a small, portable 64-bit generator with cheap stream splitting.
// The simulator keys one substream per trial as mix64(seed) xor
// mix64(trial+1), so results are independent of execution order and identical
// across platforms.

#ifndef SPOTCHECK_RNG_HPP
#define SPOTCHECK_RNG_HPP

#include <cstdint>

namespace spotcheck {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static SplitMix64 substream(uint64_t seed, uint64_t stream) {
    return SplitMix64(mix64(seed) ^ mix64(stream + 1));
  }

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  uint64_t state_;
};

}  // namespace spotcheck

#endif
