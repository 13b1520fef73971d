#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "senseopt/kc.hpp"
#include "senseopt/link_model.hpp"
#include "senseopt/mff.hpp"
#include "senseopt/simenv.hpp"

namespace senseopt {

struct MffHyper {
  int k = 9;
  double learning_rate = 0.05;
  int warmup_epochs = 4000;     // pretraining passes after the probe phase
  int epochs_per_cycle = 150;   // passes per main-loop cycle
  std::size_t buffer_capacity = 64;
};

struct AdaptiveConfig {
  int cycles = 200;
  int warmup_probes = 8;         // evenly spaced initial probes, >= 2
  double jitter = 0.01;          // exploration half-width, normalized; 0 = off
  int jitter_halflife_cycles = 50;
  EstimatorConfig estimator;
  MffHyper mff;
  KcConfig kc;
  std::uint64_t seed = 1;
};

/// One closed-loop iteration's observable state.
struct CycleRecord {
  int cycle;                  // 1-based
  double tau_applied;         // seconds
  double phi_measured;        // 1 / max(rate estimate, 1e-6)
  double mse_after_training;  // post-training buffer error, scaled units
  double kc_x;                // gradient-flow output, normalized
};

struct WarmupRecord {
  double x;          // normalized probe location
  double rate_est;   // estimated throughput there
};

struct AdaptiveResult {
  std::vector<WarmupRecord> warmup;
  std::vector<CycleRecord> records;
  double tau_learned;   // seconds
  double rate_learned;  // analytic throughput at tau_learned
  MffNetwork network;
};

/// The closed loop: probe, pretrain, then per cycle (1) settle the
/// gradient flow on the learned surface, (2) apply that sensing time and
/// estimate throughput over the window, (3) push the (x, phi) pair and
/// retrain. Deterministic given cfg.seed.
AdaptiveResult run_adaptive(const Scenario& scn, const AdaptiveConfig& cfg);

/// Per-cycle gradient-flow outputs, for convergence plots.
std::vector<std::pair<int, double>> convergence_trace(
    const std::vector<CycleRecord>& records);

}  // namespace senseopt
