#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "senseopt/detector.hpp"
#include "senseopt/kernels/rng.hpp"

namespace senseopt {

enum class FadingMode { none, rayleigh };

struct FadingConfig {
  FadingMode mode = FadingMode::none;
  double mean_gamma_s = 0.0;  // E[gamma_s] under rayleigh
  double mean_gamma_p = 0.0;  // E[gamma_p] under rayleigh
};

/// Full secondary-link environment: channel population, slot timing,
/// per-channel free probabilities (sensing order = index order), link SNRs
/// and the detector constraints.
struct Scenario {
  int np = 15;           // number of primary channels
  double slot_t = 0.1;   // slot duration T, seconds
  double tau_ho = 1e-4;  // handover time, seconds
  std::vector<double> p_free = {0.71, 0.46, 0.34, 0.72, 0.66, 0.72, 0.76, 0.35,
                                0.25, 0.70, 0.37, 0.23, 0.72, 0.24, 0.43};
  double gamma_s = 100.0;      // SU link SNR, linear
  double gamma_p = 99.0;       // PU interference SNR at the SU RX, linear
  FadingConfig fading;
  DetectorConfig detector;

  void validate() const;
};

/// One evaluated point of the average-throughput model.
struct ThroughputPoint {
  double tau;   // seconds
  double rate;  // average normalized throughput, bits/s/Hz
  int alpha;    // handover cap used
  double nce;   // normalized consumed energy 1 + g_bar (sensed channels)
};

/// Probability that sensing declares channel k (1-based) busy:
/// q_k = pfa * P_{k,0} + pd * P_{k,1}.
double busy_prob(const Scenario& scn, int k, double pfa, double pd);

/// Handover cap alpha = min(floor((T - tau)/(tau + tau_ho)), np - 1).
int max_handover(const Scenario& scn, double tau);

/// (C0, C1) = (log2(1 + gamma_s), log2(1 + gamma_s/(1 + gamma_p))).
std::pair<double, double> capacities(double gamma_s, double gamma_p);

/// Average throughput at sensing time tau under the pd == pd_min
/// reduction. Pure evaluation: any tau in (0, T) is accepted, feasibility
/// with respect to tau_min is not required. cap_override, when given,
/// must not exceed max_handover(scn, tau).
ThroughputPoint throughput(const Scenario& scn, double tau,
                           std::optional<int> cap_override = {});

/// Fading-averaged throughput. mode == none returns throughput() exactly;
/// rayleigh Monte-Carlo-averages the capacities over independent
/// exponential gamma_s / gamma_p draws (the throughput sum is affine in
/// C0 and C1, so averaging the capacities averages the rate).
ThroughputPoint faded_throughput(const Scenario& scn, double tau,
                                 std::optional<int> cap_override,
                                 std::size_t mc_samples,
                                 kernels::Xoshiro256x4& rng);

/// Average number of sensed channels 1 + g_bar for the sequential
/// handover policy.
double avg_sensed_channels(const Scenario& scn, double tau,
                           std::optional<int> cap_override = {});

/// Average energy spent finding a transmission opportunity:
/// (1 + g_bar) * p_sense * tau + g_bar * p_ho * tau_ho.
double consumed_energy(const Scenario& scn, double tau, double p_sense,
                       double p_ho, std::optional<int> cap_override = {});

/// Channel count N_p* = floor((T - tau_min)/(tau_min + tau_ho)) + 1 beyond
/// which the cap never binds on the feasible interval and throughput stops
/// depending on np.
int np_saturation_threshold(const Scenario& scn);

}  // namespace senseopt
