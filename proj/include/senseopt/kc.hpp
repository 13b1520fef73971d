#pragma once

#include <utility>
#include <vector>

namespace senseopt {

/// Gradient-flow circuit constants. The flow operates on the normalized
/// sensing time x = tau/T, so the feasible interval is [tau_min/T, 1].
struct KcConfig {
  double c = 10e-9;           // output capacitance, farads
  double g = 1e-3;            // parasitic conductance, siemens
  double penalty_slope = 1e3; // 1/R of the constraint nonlinearity
  double dt = 1e-11;          // Euler step, seconds of circuit time
  long max_steps = 200000;
  double tol = 1e4;           // convergence threshold on |dx/dt|, V/s
};

struct KcState {
  double x = 0.0;
  long step_count = 0;
  bool converged = false;
};

/// Differentiable cost the flow descends. grad must match finite
/// differences of eval; the mff sensitivity rule satisfies this.
struct CostSurface {
  virtual ~CostSurface() = default;
  virtual double eval(double x) const = 0;
  virtual double grad(double x) const = 0;
};

/// Constraint current g_j(v): 0 for v >= 0, penalty_slope * v for v < 0.
double penalty(double v, const KcConfig& cfg);

/// One forward-Euler update of
///   C dx/dt = -grad(x) - sum_j i_j df_j/dx - G x
/// with f1 = hi - x, f2 = x - lo and i_j = penalty(f_j(x)).
/// Throws NonFiniteCostError if the cost gradient is not finite.
KcState step(const KcState& state, const CostSurface& cost,
             std::pair<double, double> bounds, const KcConfig& cfg);

/// Iterates step() until |dx/dt| < tol or max_steps; converged reflects
/// which happened. max_steps exhaustion is not an error.
KcState run_to_convergence(double x0, const CostSurface& cost,
                           std::pair<double, double> bounds,
                           const KcConfig& cfg);

struct KcTrajectoryPoint {
  long step;
  double x;
  double rhs;  // C dx/dt
};

/// run_to_convergence that also records every `stride`-th state, for
/// convergence plots.
KcState run_recorded(double x0, const CostSurface& cost,
                     std::pair<double, double> bounds, const KcConfig& cfg,
                     long stride, std::vector<KcTrajectoryPoint>& out);

}  // namespace senseopt
