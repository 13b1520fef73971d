#pragma once

#include <cstdint>
#include <optional>

#include "senseopt/link_model.hpp"

namespace senseopt {

enum class DecisionMode {
  closed_form,   // sensing outcomes are Bernoulli draws with P_fa / P_d
  sample_level,  // each sensing runs a full ed_decide
};

struct EstimatorConfig {
  long t_ep_slots = 100;  // estimation window, slots
  DecisionMode decision_mode = DecisionMode::closed_form;
};

/// Per-slot Monte Carlo record.
struct SlotTrace {
  int handovers = 0;
  bool transmitted = false;
  std::optional<int> channel_used;              // 1-based
  std::optional<Hypothesis> true_state_of_used;
  double rate_achieved = 0.0;  // includes the slot-time factor; 0 if idle
  int channels_sensed = 0;     // always handovers + 1
};

/// Both random streams the simulator consumes: scalar draws for channel
/// states and Bernoulli sensing outcomes, the 4-lane stream for
/// sample-level energy detection.
struct SimRng {
  kernels::Xoshiro256pp ctrl;
  kernels::Xoshiro256x4 wide;

  explicit SimRng(std::uint64_t seed)
      : ctrl(kernels::SplitMix64(seed).next()),
        wide(kernels::SplitMix64(seed ^ 0x9E3779B97F4A7C15ULL).next()) {}
};

/// Simulates one slot: channel states are independent Bernoulli(P_{k,1})
/// draws; the SU senses channels in index order, handing over on each
/// busy declaration until the cap alpha(tau) is exhausted; transmitting on
/// the first free declaration earns C0 (truly free) or C1 (misdetection)
/// times the remaining-time factor.
SlotTrace run_slot(const Scenario& scn, double tau, SimRng& rng,
                   DecisionMode mode = DecisionMode::closed_form);

/// Mean achieved rate over est.t_ep_slots slots; unbiased estimate of the
/// analytic average throughput.
double estimate_throughput(const Scenario& scn, double tau,
                           const EstimatorConfig& est, SimRng& rng);

/// Mean sensed-channel count over a window.
double empirical_sensed_channels(const Scenario& scn, double tau, long slots,
                                 SimRng& rng,
                                 DecisionMode mode = DecisionMode::closed_form);

}  // namespace senseopt
