#pragma once

#include "senseopt/kernels/rng.hpp"

namespace senseopt {

/// Energy-detector operating constraints. gamma is the sensing SNR
/// sigma_u^2 / sigma_z^2 of the primary signal at the secondary receiver.
struct DetectorConfig {
  double fs = 6e6;        // sampling frequency, Hz
  double pd_min = 0.9;    // minimum detection probability
  double pfa_max = 0.1;   // maximum false-alarm probability
  double gamma = 0.01;    // sensing SNR, linear
  double sigma_z2 = 1.0;  // noise variance; lambda is expressed in its units

  /// Throws std::invalid_argument when outside the non-degenerate regime
  /// (requires 0 < pfa_max < pd_min < 1 and positive fs, gamma, sigma_z2).
  void validate() const;
};

/// A (sensing time, decision threshold) pair with the false-alarm and
/// detection probabilities it induces.
struct OperatingPoint {
  double tau;     // seconds
  double lambda;  // per-sample threshold, power units
  double pfa;
  double pd;
};

enum class Hypothesis { idle, busy };
enum class Decision { idle, busy };

/// False-alarm probability Q[(lambda/sigma_z^2 - 1) * sqrt(tau * fs)].
double false_alarm_prob(const DetectorConfig& cfg, double tau, double lambda);

/// Detection probability
/// Q[(lambda/sigma_z^2 - 1 - gamma) * sqrt(tau * fs / (1 + 2 gamma))].
double detection_prob(const DetectorConfig& cfg, double tau, double lambda);

/// Threshold achieving pd == pd_min at the given sensing time:
/// lambda = sigma_z^2 (1 + gamma + Q^{-1}(pd_min) sqrt((1+2 gamma)/(tau fs))).
double lambda_for_pd_min(const DetectorConfig& cfg, double tau);

/// False-alarm probability at the pd == pd_min operating point,
/// Q[beta + gamma sqrt(tau fs)] with beta = Q^{-1}(pd_min) sqrt(1+2 gamma).
double pfa_constrained(const DetectorConfig& cfg, double tau);

/// Smallest sensing time satisfying pfa_constrained(tau) <= pfa_max:
/// (1/fs) ((Q^{-1}(pfa_max) - beta)/gamma)^2.
double tau_min(const DetectorConfig& cfg);

/// The constrained operating point at tau: lambda from lambda_for_pd_min,
/// pfa from pfa_constrained, pd = pd_min.
OperatingPoint constrained_point(const DetectorConfig& cfg, double tau);

/// One sample-level energy detection: draws N = round(tau*fs) complex
/// samples (noise variance sigma_z^2; under busy truth the signal adds an
/// independent Gaussian of power gamma*sigma_z^2), sums their energies and
/// compares against N*lambda. Sample energies are drawn in Box-Muller
/// polar form; the uniform phase cancels in |y|^2.
Decision ed_decide(const DetectorConfig& cfg, double tau, double lambda,
                   Hypothesis truth, kernels::Xoshiro256x4& rng);

}  // namespace senseopt
