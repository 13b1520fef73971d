// AVX2 variants of the sampling kernels. Must stay op-for-op identical to
// the scalar reference in sample_kernels.cpp / fastlog.hpp: same uniform
// extraction, same polynomial, same fma placement, same accumulation
// order. The equivalence tests assert bit equality, not a tolerance.

#include <immintrin.h>

#include <cstring>

#include "senseopt/kernels/fastlog.hpp"
#include "senseopt/kernels/sample_kernels.hpp"

namespace senseopt::kernels::detail {

namespace {

using namespace fastlog_detail;

constexpr float kInvLn2 = 1.44269504088896341f;

inline __m256i rotl64v(__m256i x, int k) {
  return _mm256_or_si256(_mm256_slli_epi64(x, k), _mm256_srli_epi64(x, 64 - k));
}

struct State4 {
  __m256i s0, s1, s2, s3;

  explicit State4(const Xoshiro256x4& g)
      : s0(_mm256_load_si256(reinterpret_cast<const __m256i*>(g.s[0]))),
        s1(_mm256_load_si256(reinterpret_cast<const __m256i*>(g.s[1]))),
        s2(_mm256_load_si256(reinterpret_cast<const __m256i*>(g.s[2]))),
        s3(_mm256_load_si256(reinterpret_cast<const __m256i*>(g.s[3]))) {}

  void store(Xoshiro256x4& g) const {
    _mm256_store_si256(reinterpret_cast<__m256i*>(g.s[0]), s0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(g.s[1]), s1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(g.s[2]), s2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(g.s[3]), s3);
  }

  __m256i step() {
    const __m256i r = _mm256_add_epi64(rotl64v(_mm256_add_epi64(s0, s3), 23), s0);
    const __m256i t = _mm256_slli_epi64(s1, 17);
    s2 = _mm256_xor_si256(s2, s0);
    s3 = _mm256_xor_si256(s3, s1);
    s1 = _mm256_xor_si256(s1, s2);
    s0 = _mm256_xor_si256(s0, s3);
    s2 = _mm256_xor_si256(s2, t);
    s3 = rotl64v(s3, 45);
    return r;
  }

  // 8 uniforms in (0,1]: top 24 bits of each 32-bit half.
  __m256 uniforms() {
    const __m256i v = _mm256_srli_epi32(step(), 8);
    const __m256 f = _mm256_cvtepi32_ps(v);
    return _mm256_mul_ps(_mm256_add_ps(f, _mm256_set1_ps(1.0f)),
                         _mm256_set1_ps(0x1.0p-24f));
  }
};

inline __m256 fast_log8(__m256 x) {
  const __m256i bits = _mm256_castps_si256(x);
  __m256i e = _mm256_sub_epi32(
      _mm256_and_si256(_mm256_srli_epi32(bits, 23), _mm256_set1_epi32(0xFF)),
      _mm256_set1_epi32(126));
  const __m256 m = _mm256_castsi256_ps(
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi32(0x007FFFFF)),
                      _mm256_set1_epi32(0x3F000000)));

  const __m256 small = _mm256_cmp_ps(m, _mm256_set1_ps(kSqrtHalf), _CMP_LT_OQ);
  e = _mm256_sub_epi32(
      e, _mm256_and_si256(_mm256_castps_si256(small), _mm256_set1_epi32(1)));
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 f = _mm256_blendv_ps(_mm256_sub_ps(m, one),
                                    _mm256_sub_ps(_mm256_add_ps(m, m), one),
                                    small);

  __m256 p = _mm256_set1_ps(kP0);
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(kP1));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(kP2));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(kP3));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(kP4));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(kP5));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(kP6));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(kP7));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(kP8));

  const __m256 z = _mm256_mul_ps(f, f);
  const __m256 fe = _mm256_cvtepi32_ps(e);
  __m256 y = _mm256_mul_ps(_mm256_mul_ps(p, f), z);
  y = _mm256_fmadd_ps(fe, _mm256_set1_ps(kLog2Lo), y);
  y = _mm256_fmadd_ps(_mm256_set1_ps(-0.5f), z, y);
  __m256 r = _mm256_add_ps(f, y);
  r = _mm256_fmadd_ps(fe, _mm256_set1_ps(kLog2Hi), r);
  return r;
}

inline __m256 neg(__m256 x) { return _mm256_sub_ps(_mm256_setzero_ps(), x); }

}  // namespace

double neg_log_uniform_sum_avx2(Xoshiro256x4& rng, std::size_t n) {
  State4 st(rng);
  __m256d acc_lo = _mm256_setzero_pd();
  __m256d acc_hi = _mm256_setzero_pd();
  const __m256i idx = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);

  std::size_t done = 0;
  while (done < n) {
    __m256 e = neg(fast_log8(st.uniforms()));
    const std::size_t take = (n - done < 8) ? n - done : 8;
    if (take < 8) {
      const __m256i keep =
          _mm256_cmpgt_epi32(_mm256_set1_epi32(static_cast<int>(take)), idx);
      e = _mm256_and_ps(e, _mm256_castsi256_ps(keep));
    }
    acc_lo = _mm256_add_pd(acc_lo, _mm256_cvtps_pd(_mm256_castps256_ps128(e)));
    acc_hi = _mm256_add_pd(acc_hi, _mm256_cvtps_pd(_mm256_extractf128_ps(e, 1)));
    done += take;
  }
  st.store(rng);

  alignas(32) double t[4];
  _mm256_store_pd(t, _mm256_add_pd(acc_lo, acc_hi));
  return (t[0] + t[1]) + (t[2] + t[3]);
}

void capacity_pair_fill_avx2(Xoshiro256x4& rng, std::span<float> c0,
                             std::span<float> c1, float mean_s, float mean_p) {
  State4 st(rng);
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 ms = _mm256_set1_ps(mean_s);
  const __m256 mp = _mm256_set1_ps(mean_p);
  const __m256 invln2 = _mm256_set1_ps(kInvLn2);

  const std::size_t n = c0.size();
  std::size_t done = 0;
  while (done < n) {
    const __m256 es = neg(fast_log8(st.uniforms()));
    const __m256 ep = neg(fast_log8(st.uniforms()));
    const __m256 p = _mm256_mul_ps(ms, es);
    const __m256 d = _mm256_fmadd_ps(mp, ep, one);
    const __m256 v0 = _mm256_mul_ps(fast_log8(_mm256_add_ps(one, p)), invln2);
    const __m256 v1 = _mm256_mul_ps(
        fast_log8(_mm256_add_ps(one, _mm256_div_ps(p, d))), invln2);

    const std::size_t take = (n - done < 8) ? n - done : 8;
    if (take == 8) {
      _mm256_storeu_ps(c0.data() + done, v0);
      _mm256_storeu_ps(c1.data() + done, v1);
    } else {
      alignas(32) float t0[8], t1[8];
      _mm256_store_ps(t0, v0);
      _mm256_store_ps(t1, v1);
      std::memcpy(c0.data() + done, t0, take * sizeof(float));
      std::memcpy(c1.data() + done, t1, take * sizeof(float));
    }
    done += take;
  }
  st.store(rng);
}

void fast_log_array_avx2(std::span<const float> in, std::span<float> out) {
  std::size_t i = 0;
  for (; i + 8 <= in.size(); i += 8)
    _mm256_storeu_ps(out.data() + i, fast_log8(_mm256_loadu_ps(in.data() + i)));
  for (; i < in.size(); ++i) out[i] = fast_log(in[i]);
}

}  // namespace senseopt::kernels::detail
