#include "senseopt/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "senseopt/errors.hpp"

namespace senseopt {

namespace {

constexpr double kRateClamp = 1e-6;  // phi = 1/max(rate, kRateClamp)
constexpr double kEdge = 1e-9;       // strict-interval margin, normalized

struct MffCost final : CostSurface {
  const MffNetwork* net;
  explicit MffCost(const MffNetwork& n) : net(&n) {}
  double eval(double x) const override { return forward(*net, x); }
  double grad(double x) const override { return sensitivity(*net, x); }
};

double grid_argmin(const MffNetwork& net, double lo, double hi, int points) {
  double best_x = lo;
  double best_v = forward(net, lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double v = forward(net, x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

AdaptiveResult run_adaptive(const Scenario& scn, const AdaptiveConfig& cfg) {
  scn.validate();
  if (cfg.cycles < 1)
    throw std::invalid_argument("run_adaptive: cycles must be >= 1");
  if (cfg.warmup_probes < 2)
    throw std::invalid_argument("run_adaptive: warmup_probes must be >= 2");

  const double t_slot = scn.slot_t;
  const double x_lo = tau_min(scn.detector) / t_slot;
  if (!(x_lo < 1.0))
    throw InfeasibleError("run_adaptive: tau_min >= slot duration");
  const double x_hi = 1.0;
  const auto bounds = std::make_pair(x_lo, x_hi);
  const auto clamp_apply = [&](double x) {
    return std::clamp(x, x_lo + kEdge, x_hi - kEdge);
  };

  kernels::SplitMix64 seeds(cfg.seed);
  SimRng est_rng(seeds.next());
  MffNetwork net = MffNetwork::init(cfg.mff.k, t_slot, seeds.next());
  kernels::Xoshiro256pp shuffle_rng(seeds.next());
  kernels::Xoshiro256pp jitter_rng(seeds.next());

  TrainingBuffer buffer(cfg.mff.buffer_capacity);
  AdaptiveResult result;
  double phi_ref = 0.0;

  // Warm-up: evenly spaced probes seed a non-degenerate surface before the
  // gradient flow is trusted.
  for (int i = 1; i <= cfg.warmup_probes; ++i) {
    const double x =
        clamp_apply(x_lo + (x_hi - x_lo) * i / (cfg.warmup_probes + 1));
    const double rate =
        estimate_throughput(scn, x * t_slot, cfg.estimator, est_rng);
    const double phi = 1.0 / std::max(rate, kRateClamp);
    phi_ref = std::max(phi_ref, phi);
    buffer.push(x, phi);
    result.warmup.push_back({x, rate});
  }
  net.target_scale = 0.9 / phi_ref;
  train_step(net, buffer, cfg.mff.learning_rate, cfg.mff.warmup_epochs,
             shuffle_rng);

  double x_current = grid_argmin(net, x_lo, x_hi, 1001);

  for (int cycle = 1; cycle <= cfg.cycles; ++cycle) {
    const KcState kc_state =
        run_to_convergence(x_current, MffCost(net), bounds, cfg.kc);
    const double kc_x = std::clamp(kc_state.x, x_lo, x_hi);

    double x_apply = kc_x;
    if (cfg.jitter > 0.0) {
      const double amp =
          cfg.jitter *
          std::exp2(-static_cast<double>((cycle - 1) / cfg.jitter_halflife_cycles));
      x_apply += amp * (2.0 * jitter_rng.uniform01() - 1.0);
    }
    x_apply = clamp_apply(x_apply);

    const double tau = x_apply * t_slot;
    const double rate = estimate_throughput(scn, tau, cfg.estimator, est_rng);
    const double phi = 1.0 / std::max(rate, kRateClamp);
    if (phi > phi_ref) {
      phi_ref = phi;
      net.target_scale = 0.9 / phi_ref;  // buffer stores raw phi: rescales too
    }
    buffer.push(x_apply, phi);
    const double mse = train_step(net, buffer, cfg.mff.learning_rate,
                                  cfg.mff.epochs_per_cycle, shuffle_rng);

    result.records.push_back({cycle, tau, phi, mse, kc_x});
    x_current = kc_x;
  }

  const KcState final_state =
      run_to_convergence(x_current, MffCost(net), bounds, cfg.kc);
  result.tau_learned = clamp_apply(final_state.x) * t_slot;
  result.rate_learned = throughput(scn, result.tau_learned).rate;
  result.network = std::move(net);
  return result;
}

std::vector<std::pair<int, double>> convergence_trace(
    const std::vector<CycleRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("convergence_trace: empty record list");
  std::vector<std::pair<int, double>> out;
  out.reserve(records.size());
  for (const auto& r : records) out.emplace_back(r.cycle, r.kc_x);
  return out;
}

}  // namespace senseopt
