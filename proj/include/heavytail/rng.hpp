#pragma once

#include <cstdint>
#include <limits>

namespace heavytail {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for sub-stream `index` of `seed`; a pure function of both arguments.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) + mix64(index + 0x9E3779B97F4A7C15ULL));
}

// Counter-based generator: the i-th output is mix64(key + (i + 1) * golden).
// Any draw position is addressable without replaying the stream, and distinct
// keys give disjoint counter sequences. Satisfies UniformRandomBitGenerator.
// The output sequence is part of the reproducibility contract; do not change.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(mix64(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(derive_seed(seed, stream))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + (++counter_) * kGolden); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t position() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace heavytail
