#pragma once

#include <cstdint>
#include <cstddef>

namespace senseopt::kernels {

/// SplitMix64, used only to expand seeds into full generator states.
struct SplitMix64 {
  std::uint64_t state;

  explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

constexpr std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

/// xoshiro256++ scalar generator. All control-flow randomness in the
/// simulator (channel states, shuffles, jitter) comes from this stream,
/// so runs are reproducible independent of the platform libm.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl64(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl64(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, n), n >= 1. Multiply-shift, no modulo bias worth
  /// caring about at these stream lengths.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t s_[4];
};

/// Four independent xoshiro256++ streams in structure-of-arrays layout,
/// word-major: s[word][lane]. One step yields 4 x uint64 = 8 x uint32.
/// The scalar and AVX2 sample kernels consume this state identically,
/// producing the same stream, so backend equivalence can be tested
/// bit-for-bit.
struct alignas(32) Xoshiro256x4 {
  std::uint64_t s[4][4];

  explicit Xoshiro256x4(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (int lane = 0; lane < 4; ++lane)
      for (int word = 0; word < 4; ++word) s[word][lane] = sm.next();
  }
};

}  // namespace senseopt::kernels
