#include "senseopt/detector.hpp"

#include <cmath>
#include <stdexcept>

#include "senseopt/kernels/sample_kernels.hpp"
#include "senseopt/qfunc.hpp"

namespace senseopt {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double beta_of(const DetectorConfig& cfg) {
  return gaussian_tail_inverse(cfg.pd_min) * std::sqrt(1.0 + 2.0 * cfg.gamma);
}

}  // namespace

void DetectorConfig::validate() const {
  require(fs > 0.0, "DetectorConfig: fs must be positive");
  require(gamma > 0.0, "DetectorConfig: gamma must be positive");
  require(sigma_z2 > 0.0, "DetectorConfig: sigma_z2 must be positive");
  require(pd_min > 0.0 && pd_min < 1.0, "DetectorConfig: pd_min not in (0,1)");
  require(pfa_max > 0.0 && pfa_max < 1.0,
          "DetectorConfig: pfa_max not in (0,1)");
  require(pd_min > pfa_max, "DetectorConfig: need pd_min > pfa_max");
}

double false_alarm_prob(const DetectorConfig& cfg, double tau, double lambda) {
  require(tau > 0.0, "false_alarm_prob: tau must be positive");
  require(lambda > 0.0, "false_alarm_prob: lambda must be positive");
  return gaussian_tail((lambda / cfg.sigma_z2 - 1.0) * std::sqrt(tau * cfg.fs));
}

double detection_prob(const DetectorConfig& cfg, double tau, double lambda) {
  require(tau > 0.0, "detection_prob: tau must be positive");
  require(lambda > 0.0, "detection_prob: lambda must be positive");
  return gaussian_tail((lambda / cfg.sigma_z2 - 1.0 - cfg.gamma) *
                       std::sqrt(tau * cfg.fs / (1.0 + 2.0 * cfg.gamma)));
}

double lambda_for_pd_min(const DetectorConfig& cfg, double tau) {
  require(tau > 0.0, "lambda_for_pd_min: tau must be positive");
  const double qi = gaussian_tail_inverse(cfg.pd_min);
  return cfg.sigma_z2 *
         (1.0 + cfg.gamma +
          qi * std::sqrt((1.0 + 2.0 * cfg.gamma) / (tau * cfg.fs)));
}

double pfa_constrained(const DetectorConfig& cfg, double tau) {
  require(tau > 0.0, "pfa_constrained: tau must be positive");
  return gaussian_tail(beta_of(cfg) + cfg.gamma * std::sqrt(tau * cfg.fs));
}

double tau_min(const DetectorConfig& cfg) {
  const double num = gaussian_tail_inverse(cfg.pfa_max) - beta_of(cfg);
  const double root = num / cfg.gamma;
  return root * root / cfg.fs;
}

OperatingPoint constrained_point(const DetectorConfig& cfg, double tau) {
  return OperatingPoint{tau, lambda_for_pd_min(cfg, tau),
                        pfa_constrained(cfg, tau), cfg.pd_min};
}

Decision ed_decide(const DetectorConfig& cfg, double tau, double lambda,
                   Hypothesis truth, kernels::Xoshiro256x4& rng) {
  const auto n = static_cast<long long>(std::llround(tau * cfg.fs));
  require(n >= 1, "ed_decide: need at least one sample (round(tau*fs) >= 1)");

  const double sigma2 = truth == Hypothesis::busy
                            ? cfg.sigma_z2 * (1.0 + cfg.gamma)
                            : cfg.sigma_z2;
  const double x =
      sigma2 * kernels::neg_log_uniform_sum(rng, static_cast<std::size_t>(n));
  return x >= static_cast<double>(n) * lambda ? Decision::busy
                                              : Decision::idle;
}

}  // namespace senseopt
