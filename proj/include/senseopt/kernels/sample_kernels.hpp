#pragma once

#include <cstddef>
#include <span>

#include "senseopt/kernels/backend.hpp"
#include "senseopt/kernels/rng.hpp"

namespace senseopt::kernels {

// Data-parallel sampling kernels. Each has a scalar reference and an AVX2
// variant that consume the Xoshiro256x4 stream identically; the dispatching
// overloads pick active_backend(). Per-sample math is single precision,
// accumulation is double.

/// Sum of n draws of -ln(u), u uniform on (0,1] with 24-bit resolution.
/// Multiplied by sigma^2 this is the summed energy of n circularly
/// symmetric complex Gaussian samples (the energy detector's test
/// statistic): the sample's uniform phase cancels in |y|^2, leaving the
/// Box-Muller radius term only.
double neg_log_uniform_sum(Xoshiro256x4& rng, std::size_t n);
double neg_log_uniform_sum(Backend b, Xoshiro256x4& rng, std::size_t n);

/// Per-draw Shannon capacities under Rayleigh fading: with es, ep unit
/// exponentials,
///   c0[i] = log2(1 + mean_s * es)
///   c1[i] = log2(1 + mean_s * es / (1 + mean_p * ep))
/// c0 and c1 share the same es draw (the physical gamma_s realization).
void capacity_pair_fill(Xoshiro256x4& rng, std::span<float> c0,
                        std::span<float> c1, float mean_s, float mean_p);
void capacity_pair_fill(Backend b, Xoshiro256x4& rng, std::span<float> c0,
                        std::span<float> c1, float mean_s, float mean_p);

/// Element-wise fast_log, exposed for accuracy/equivalence tests.
void fast_log_array(std::span<const float> in, std::span<float> out);
void fast_log_array(Backend b, std::span<const float> in,
                    std::span<float> out);

namespace detail {
double neg_log_uniform_sum_scalar(Xoshiro256x4& rng, std::size_t n);
double neg_log_uniform_sum_avx2(Xoshiro256x4& rng, std::size_t n);
void capacity_pair_fill_scalar(Xoshiro256x4& rng, std::span<float> c0,
                               std::span<float> c1, float mean_s,
                               float mean_p);
void capacity_pair_fill_avx2(Xoshiro256x4& rng, std::span<float> c0,
                             std::span<float> c1, float mean_s, float mean_p);
void fast_log_array_scalar(std::span<const float> in, std::span<float> out);
void fast_log_array_avx2(std::span<const float> in, std::span<float> out);
}  // namespace detail

}  // namespace senseopt::kernels
