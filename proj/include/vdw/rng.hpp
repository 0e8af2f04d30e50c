#pragma once

#include <cstdint>

namespace vdw {

// Purpose tags keep the draws for theta, centers, radii, ... on disjoint
// streams, so changing how many values one consumer takes never shifts another.
enum class StreamTag : std::uint64_t {
  kTheta = 1,
  kCenters = 2,
  kRadii = 3,
  kApSample = 4,
  kCondition2 = 5,
  kMissProbability = 6,
  kQuadrature = 7,
  kDiophantine = 8,
  kKernelSamples = 9,
  kTest = 99,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: output i is a pure function of (key, i), where the
/// key is derived from (seed, tag, sub). Any draw can be recomputed in
/// isolation, and streams with different keys are independent for all
/// practical purposes.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, StreamTag tag, std::uint64_t sub = 0)
      : key_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag) ^
                                          splitmix64(sub + 0x632be59bd9b4e019ULL)))) {}

  std::uint64_t at(std::uint64_t index) const {
    return splitmix64(key_ + index * 0xd1b54a32d192ed03ULL);
  }

  std::uint64_t next() { return at(counter_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; no modulo bias. bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Largest multiple of bound representable in 64 bits, as 2^64 - (2^64 mod bound).
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace vdw
