#include "senseopt/link_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "senseopt/kernels/sample_kernels.hpp"

namespace senseopt {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Resolves the handover cap for an evaluation: defaults to alpha(tau),
// rejects overrides that exceed it.
int resolve_cap(const Scenario& scn, double tau, std::optional<int> cap) {
  const int alpha = max_handover(scn, tau);
  if (!cap) return alpha;
  require(*cap >= 0, "cap_override must be nonnegative");
  require(*cap <= alpha, "cap_override exceeds max_handover");
  return *cap;
}

// q_1..q_cap at the constrained operating point.
void busy_probs(const Scenario& scn, double pfa, int cap,
                std::vector<double>& q) {
  q.resize(static_cast<std::size_t>(cap));
  for (int k = 1; k <= cap; ++k)
    q[static_cast<std::size_t>(k - 1)] = busy_prob(scn, k, pfa, scn.detector.pd_min);
}

// Core throughput sum with explicit capacities, shared by the plain and
// fading-averaged paths.
double rate_sum(const Scenario& scn, double tau, int cap, double pfa,
                double c0, double c1) {
  const double pd = scn.detector.pd_min;
  double rate = 0.0;
  double qprod = 1.0;  // q_0 ... q_m with q_0 = 1
  for (int m = 0; m <= cap; ++m) {
    const double p0 = scn.p_free[static_cast<std::size_t>(m)];
    const double p1 = 1.0 - p0;
    const double a = c1 * p1 * (1.0 - pd) + c0 * p0 * (1.0 - pfa);
    const double t =
        1.0 - (tau + m * (tau + scn.tau_ho)) / scn.slot_t;
    rate += qprod * a * std::max(t, 0.0);
    if (m < cap)
      qprod *= busy_prob(scn, m + 1, pfa, pd);
  }
  return rate;
}

}  // namespace

void Scenario::validate() const {
  detector.validate();
  require(np >= 1, "Scenario: np must be >= 1");
  require(slot_t > 0.0, "Scenario: slot_t must be positive");
  require(tau_ho > 0.0 && tau_ho < slot_t,
          "Scenario: need 0 < tau_ho < slot_t");
  require(p_free.size() == static_cast<std::size_t>(np),
          "Scenario: p_free must have np entries");
  for (double p : p_free)
    require(p >= 0.0 && p <= 1.0, "Scenario: p_free entries must be in [0,1]");
  require(gamma_s > 0.0, "Scenario: gamma_s must be positive");
  require(gamma_p >= 0.0, "Scenario: gamma_p must be nonnegative");
  if (fading.mode == FadingMode::rayleigh) {
    require(fading.mean_gamma_s > 0.0,
            "Scenario: rayleigh fading needs mean_gamma_s > 0");
    require(fading.mean_gamma_p >= 0.0,
            "Scenario: mean_gamma_p must be nonnegative");
  }
}

double busy_prob(const Scenario& scn, int k, double pfa, double pd) {
  require(k >= 1 && k <= scn.np, "busy_prob: channel index out of range");
  const double p0 = scn.p_free[static_cast<std::size_t>(k - 1)];
  return pfa * p0 + pd * (1.0 - p0);
}

int max_handover(const Scenario& scn, double tau) {
  require(tau > 0.0 && tau < scn.slot_t, "max_handover: tau outside (0, T)");
  const double slots = std::floor((scn.slot_t - tau) / (tau + scn.tau_ho));
  return static_cast<int>(std::min(slots, static_cast<double>(scn.np - 1)));
}

std::pair<double, double> capacities(double gamma_s, double gamma_p) {
  require(gamma_s > 0.0, "capacities: gamma_s must be positive");
  require(gamma_p >= 0.0, "capacities: gamma_p must be nonnegative");
  return {std::log2(1.0 + gamma_s), std::log2(1.0 + gamma_s / (1.0 + gamma_p))};
}

ThroughputPoint throughput(const Scenario& scn, double tau,
                           std::optional<int> cap_override) {
  const int cap = resolve_cap(scn, tau, cap_override);
  const double pfa = pfa_constrained(scn.detector, tau);
  const auto [c0, c1] = capacities(scn.gamma_s, scn.gamma_p);
  return ThroughputPoint{tau, rate_sum(scn, tau, cap, pfa, c0, c1), cap,
                         avg_sensed_channels(scn, tau, cap)};
}

ThroughputPoint faded_throughput(const Scenario& scn, double tau,
                                 std::optional<int> cap_override,
                                 std::size_t mc_samples,
                                 kernels::Xoshiro256x4& rng) {
  if (scn.fading.mode == FadingMode::none) return throughput(scn, tau, cap_override);
  require(mc_samples >= 1, "faded_throughput: mc_samples must be >= 1");
  require(scn.fading.mean_gamma_s > 0.0,
          "faded_throughput: rayleigh fading needs mean_gamma_s > 0");
  require(scn.fading.mean_gamma_p >= 0.0,
          "faded_throughput: mean_gamma_p must be nonnegative");

  const int cap = resolve_cap(scn, tau, cap_override);
  const double pfa = pfa_constrained(scn.detector, tau);

  // E[R] = rate_sum evaluated at (E[C0], E[C1]) by affinity in (C0, C1).
  constexpr std::size_t kChunk = 4096;
  std::vector<float> c0(kChunk), c1(kChunk);
  double sum0 = 0.0, sum1 = 0.0;
  std::size_t left = mc_samples;
  while (left > 0) {
    const std::size_t m = std::min(left, kChunk);
    kernels::capacity_pair_fill(rng, std::span<float>(c0.data(), m),
                                std::span<float>(c1.data(), m),
                                static_cast<float>(scn.fading.mean_gamma_s),
                                static_cast<float>(scn.fading.mean_gamma_p));
    for (std::size_t i = 0; i < m; ++i) {
      sum0 += static_cast<double>(c0[i]);
      sum1 += static_cast<double>(c1[i]);
    }
    left -= m;
  }
  const double n = static_cast<double>(mc_samples);
  const double rate = rate_sum(scn, tau, cap, pfa, sum0 / n, sum1 / n);
  return ThroughputPoint{tau, rate, cap, avg_sensed_channels(scn, tau, cap)};
}

double avg_sensed_channels(const Scenario& scn, double tau,
                           std::optional<int> cap_override) {
  const int cap = resolve_cap(scn, tau, cap_override);
  if (cap == 0) return 1.0;
  const double pfa = pfa_constrained(scn.detector, tau);
  std::vector<double> q;
  busy_probs(scn, pfa, cap, q);

  double sensed = 1.0;
  double qprod = 1.0;
  for (int m = 1; m < cap; ++m) {
    qprod *= q[static_cast<std::size_t>(m - 1)];
    sensed += m * (1.0 - q[static_cast<std::size_t>(m)]) * qprod;
  }
  qprod *= q[static_cast<std::size_t>(cap - 1)];
  sensed += cap * qprod;
  return sensed;
}

double consumed_energy(const Scenario& scn, double tau, double p_sense,
                       double p_ho, std::optional<int> cap_override) {
  require(p_sense > 0.0, "consumed_energy: p_sense must be positive");
  require(p_ho >= 0.0, "consumed_energy: p_ho must be nonnegative");
  const double g_bar = avg_sensed_channels(scn, tau, cap_override) - 1.0;
  return (1.0 + g_bar) * p_sense * tau + g_bar * p_ho * scn.tau_ho;
}

int np_saturation_threshold(const Scenario& scn) {
  const double tmin = tau_min(scn.detector);
  return static_cast<int>(
             std::floor((scn.slot_t - tmin) / (tmin + scn.tau_ho))) +
         1;
}

}  // namespace senseopt
