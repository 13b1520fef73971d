#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace senseopt::kernels {

// Cephes-style single-precision natural log. Valid for positive normal
// floats; no zero/inf/nan handling, callers guarantee the domain.
// The AVX2 kernel in sample_kernels_avx2.cpp executes this exact op
// sequence (same constants, same fma placement) lane-parallel, which is
// what makes scalar-vs-simd equivalence tests exact instead of
// tolerance-based.

namespace fastlog_detail {
inline constexpr float kSqrtHalf = 0.70710678118654752440f;
inline constexpr float kLog2Lo = -2.12194440e-4f;
inline constexpr float kLog2Hi = 0.693359375f;
inline constexpr float kP0 = 7.0376836292e-2f;
inline constexpr float kP1 = -1.1514610310e-1f;
inline constexpr float kP2 = 1.1676998740e-1f;
inline constexpr float kP3 = -1.2420140846e-1f;
inline constexpr float kP4 = 1.4249322787e-1f;
inline constexpr float kP5 = -1.6668057665e-1f;
inline constexpr float kP6 = 2.0000714765e-1f;
inline constexpr float kP7 = -2.4999993993e-1f;
inline constexpr float kP8 = 3.3333331174e-1f;
}  // namespace fastlog_detail

inline float fast_log(float x) {
  using namespace fastlog_detail;
  const std::int32_t bits = std::bit_cast<std::int32_t>(x);
  std::int32_t e = ((bits >> 23) & 0xFF) - 126;  // x = m * 2^e, m in [0.5, 1)
  float m = std::bit_cast<float>((bits & 0x007FFFFF) | 0x3F000000);

  const bool small = m < kSqrtHalf;  // shift m into [sqrt(1/2), sqrt(2))
  e -= small ? 1 : 0;
  const float f = small ? (m + m - 1.0f) : (m - 1.0f);

  float p = kP0;
  p = std::fmaf(p, f, kP1);
  p = std::fmaf(p, f, kP2);
  p = std::fmaf(p, f, kP3);
  p = std::fmaf(p, f, kP4);
  p = std::fmaf(p, f, kP5);
  p = std::fmaf(p, f, kP6);
  p = std::fmaf(p, f, kP7);
  p = std::fmaf(p, f, kP8);

  const float z = f * f;
  const float fe = static_cast<float>(e);
  float y = (p * f) * z;
  y = std::fmaf(fe, kLog2Lo, y);
  y = std::fmaf(-0.5f, z, y);
  float r = f + y;
  r = std::fmaf(fe, kLog2Hi, r);
  return r;
}

/// Map the top 24 bits of a 32-bit word to a uniform float in (0, 1].
/// (v + 1) <= 2^24 is exactly representable, so there is no rounding step
/// for the backends to disagree on.
inline float uniform_from_bits(std::uint32_t w) {
  const float v = static_cast<float>(static_cast<std::int32_t>(w >> 8));
  return (v + 1.0f) * 0x1.0p-24f;
}

}  // namespace senseopt::kernels
