#include "senseopt/kernels/sample_kernels.hpp"

#include <stdexcept>

#include "senseopt/kernels/fastlog.hpp"

namespace senseopt::kernels {

namespace {

constexpr float kInvLn2 = 1.44269504088896341f;

// One 4-lane xoshiro256++ step; r[j] is lane j's uint64 output.
inline void step4(Xoshiro256x4& g, std::uint64_t r[4]) {
  for (int j = 0; j < 4; ++j) {
    r[j] = rotl64(g.s[0][j] + g.s[3][j], 23) + g.s[0][j];
    const std::uint64_t t = g.s[1][j] << 17;
    g.s[2][j] ^= g.s[0][j];
    g.s[3][j] ^= g.s[1][j];
    g.s[1][j] ^= g.s[2][j];
    g.s[0][j] ^= g.s[3][j];
    g.s[2][j] ^= t;
    g.s[3][j] = rotl64(g.s[3][j], 45);
  }
}

// 8 uniforms in the AVX2 register's 32-bit element order:
// lo(r0), hi(r0), lo(r1), hi(r1), ...
inline void uniforms8(Xoshiro256x4& g, float u[8]) {
  std::uint64_t r[4];
  step4(g, r);
  for (int j = 0; j < 4; ++j) {
    u[2 * j] = uniform_from_bits(static_cast<std::uint32_t>(r[j]));
    u[2 * j + 1] = uniform_from_bits(static_cast<std::uint32_t>(r[j] >> 32));
  }
}

}  // namespace

namespace detail {

double neg_log_uniform_sum_scalar(Xoshiro256x4& rng, std::size_t n) {
  double acc[8] = {};
  float u[8];
  std::size_t done = 0;
  while (done < n) {
    uniforms8(rng, u);
    const std::size_t take = (n - done < 8) ? n - done : 8;
    for (std::size_t k = 0; k < 8; ++k) {
      const float e = (k < take) ? -fast_log(u[k]) : 0.0f;
      acc[k] += static_cast<double>(e);
    }
    done += take;
  }
  const double t0 = acc[0] + acc[4];
  const double t1 = acc[1] + acc[5];
  const double t2 = acc[2] + acc[6];
  const double t3 = acc[3] + acc[7];
  return (t0 + t1) + (t2 + t3);
}

void capacity_pair_fill_scalar(Xoshiro256x4& rng, std::span<float> c0,
                               std::span<float> c1, float mean_s,
                               float mean_p) {
  const std::size_t n = c0.size();
  float us[8], up[8];
  std::size_t done = 0;
  while (done < n) {
    uniforms8(rng, us);
    uniforms8(rng, up);
    const std::size_t take = (n - done < 8) ? n - done : 8;
    for (std::size_t k = 0; k < take; ++k) {
      const float es = -fast_log(us[k]);
      const float ep = -fast_log(up[k]);
      const float p = mean_s * es;
      const float d = std::fmaf(mean_p, ep, 1.0f);
      c0[done + k] = fast_log(1.0f + p) * kInvLn2;
      c1[done + k] = fast_log(1.0f + p / d) * kInvLn2;
    }
    done += take;
  }
}

void fast_log_array_scalar(std::span<const float> in, std::span<float> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = fast_log(in[i]);
}

#if !SENSEOPT_HAVE_AVX2
double neg_log_uniform_sum_avx2(Xoshiro256x4& rng, std::size_t n) {
  return neg_log_uniform_sum_scalar(rng, n);
}
void capacity_pair_fill_avx2(Xoshiro256x4& rng, std::span<float> c0,
                             std::span<float> c1, float mean_s, float mean_p) {
  capacity_pair_fill_scalar(rng, c0, c1, mean_s, mean_p);
}
void fast_log_array_avx2(std::span<const float> in, std::span<float> out) {
  fast_log_array_scalar(in, out);
}
#endif

}  // namespace detail

double neg_log_uniform_sum(Backend b, Xoshiro256x4& rng, std::size_t n) {
  return b == Backend::avx2 ? detail::neg_log_uniform_sum_avx2(rng, n)
                            : detail::neg_log_uniform_sum_scalar(rng, n);
}

double neg_log_uniform_sum(Xoshiro256x4& rng, std::size_t n) {
  return neg_log_uniform_sum(active_backend(), rng, n);
}

void capacity_pair_fill(Backend b, Xoshiro256x4& rng, std::span<float> c0,
                        std::span<float> c1, float mean_s, float mean_p) {
  if (c0.size() != c1.size())
    throw std::invalid_argument("capacity_pair_fill: size mismatch");
  if (b == Backend::avx2)
    detail::capacity_pair_fill_avx2(rng, c0, c1, mean_s, mean_p);
  else
    detail::capacity_pair_fill_scalar(rng, c0, c1, mean_s, mean_p);
}

void capacity_pair_fill(Xoshiro256x4& rng, std::span<float> c0,
                        std::span<float> c1, float mean_s, float mean_p) {
  capacity_pair_fill(active_backend(), rng, c0, c1, mean_s, mean_p);
}

void fast_log_array(Backend b, std::span<const float> in,
                    std::span<float> out) {
  if (in.size() != out.size())
    throw std::invalid_argument("fast_log_array: size mismatch");
  if (b == Backend::avx2)
    detail::fast_log_array_avx2(in, out);
  else
    detail::fast_log_array_scalar(in, out);
}

void fast_log_array(std::span<const float> in, std::span<float> out) {
  fast_log_array(active_backend(), in, out);
}

}  // namespace senseopt::kernels
