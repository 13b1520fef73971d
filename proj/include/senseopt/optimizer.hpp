#pragma once

#include <optional>

#include "senseopt/link_model.hpp"

namespace senseopt {

struct OptimizationResult {
  double tau_opt;          // seconds, strictly inside (tau_min, T)
  double rate_max;         // bits/s/Hz
  int alpha_at_opt;        // handover cap at the optimum
  double nce_at_opt;       // 1 + g_bar at the optimum
  int segments_evaluated;  // smooth pieces searched
};

struct LResult {
  double l;         // maximum achievable throughput (Eq. 20 sense)
  double tau_opt;   // its maximizer
  int alpha_opt;    // cap at the maximizer
  int np_star;      // saturation channel count
};

struct TradeoffResult {
  double tf;
  int alpha_bar;
  double tau_opt_tf;  // seconds
  double rate_tf;     // bits/s/Hz
  double nce_tf;      // sensed channels at the tradeoff optimum
};

/// Global maximizer of the throughput over the feasible interval
/// (tau_min, T). The objective is piecewise smooth with breakpoints where
/// the handover cap drops; each smooth segment is searched by
/// golden-section (1e-7 s bracket) seeded from a coarse scan, and a
/// 1e4-point uniform grid backstops the segment results. Throws
/// InfeasibleError when tau_min >= T. A cap_override caps the handover
/// count at min(cap_override, alpha(tau)) across the sweep.
OptimizationResult optimize_tau(const Scenario& scn,
                                std::optional<int> cap_override = {});

/// Copy of scn with np raised to np_saturation_threshold, p_free extended
/// cyclically. Returns scn unchanged when already saturated.
Scenario extend_to_saturation(const Scenario& scn);

/// Maximum achievable throughput L: optimize_tau on the saturated
/// scenario.
LResult max_throughput_L(const Scenario& scn);

/// Smallest cap alpha_bar in [0, alpha_opt] whose re-optimized throughput
/// reaches tf * L. Candidates are evaluated on the saturated scenario
/// (the tradeoff problem is defined at np = np_star).
int tf_to_alpha_bar(const Scenario& scn, double tf);

/// Energy-aware optimum: optimize_tau with the cap from tf_to_alpha_bar.
TradeoffResult optimize_tau_tf(const Scenario& scn, double tf);

}  // namespace senseopt
