#include "senseopt/simenv.hpp"

#include <stdexcept>

namespace senseopt {

SlotTrace run_slot(const Scenario& scn, double tau, SimRng& rng,
                   DecisionMode mode) {
  if (!(tau > 0.0 && tau < scn.slot_t))
    throw std::invalid_argument("run_slot: tau outside (0, T)");

  const int alpha = max_handover(scn, tau);
  const double pfa = pfa_constrained(scn.detector, tau);
  const double pd = scn.detector.pd_min;
  const double lambda = mode == DecisionMode::sample_level
                            ? lambda_for_pd_min(scn.detector, tau)
                            : 0.0;
  const auto [c0, c1] = capacities(scn.gamma_s, scn.gamma_p);

  SlotTrace trace;
  for (int m = 0; m <= alpha; ++m) {
    const int k = m + 1;  // channel sensed after m handovers
    const bool busy =
        rng.ctrl.bernoulli(1.0 - scn.p_free[static_cast<std::size_t>(k - 1)]);

    bool declared_busy;
    if (mode == DecisionMode::closed_form) {
      declared_busy = rng.ctrl.bernoulli(busy ? pd : pfa);
    } else {
      declared_busy = ed_decide(scn.detector, tau, lambda,
                                busy ? Hypothesis::busy : Hypothesis::idle,
                                rng.wide) == Decision::busy;
    }

    if (!declared_busy) {
      trace.handovers = m;
      trace.channels_sensed = m + 1;
      trace.transmitted = true;
      trace.channel_used = k;
      trace.true_state_of_used = busy ? Hypothesis::busy : Hypothesis::idle;
      const double t = 1.0 - (tau + m * (tau + scn.tau_ho)) / scn.slot_t;
      trace.rate_achieved = (busy ? c1 : c0) * t;
      return trace;
    }
  }

  // Every allowed channel declared busy: no transmission this slot.
  trace.handovers = alpha;
  trace.channels_sensed = alpha + 1;
  return trace;
}

double estimate_throughput(const Scenario& scn, double tau,
                           const EstimatorConfig& est, SimRng& rng) {
  if (est.t_ep_slots < 1)
    throw std::invalid_argument("estimate_throughput: t_ep_slots must be >= 1");
  double sum = 0.0;
  for (long i = 0; i < est.t_ep_slots; ++i)
    sum += run_slot(scn, tau, rng, est.decision_mode).rate_achieved;
  return sum / static_cast<double>(est.t_ep_slots);
}

double empirical_sensed_channels(const Scenario& scn, double tau, long slots,
                                 SimRng& rng, DecisionMode mode) {
  if (slots < 1)
    throw std::invalid_argument("empirical_sensed_channels: slots must be >= 1");
  double sum = 0.0;
  for (long i = 0; i < slots; ++i)
    sum += run_slot(scn, tau, rng, mode).channels_sensed;
  return sum / static_cast<double>(slots);
}

}  // namespace senseopt
