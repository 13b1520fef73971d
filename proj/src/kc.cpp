#include "senseopt/kc.hpp"

#include <cmath>
#include <stdexcept>

#include "senseopt/errors.hpp"

namespace senseopt {

namespace {

void check_cfg(const KcConfig& cfg) {
  if (!(cfg.c > 0.0)) throw std::invalid_argument("KcConfig: c must be > 0");
  if (!(cfg.g >= 0.0)) throw std::invalid_argument("KcConfig: g must be >= 0");
  if (!(cfg.penalty_slope > 0.0))
    throw std::invalid_argument("KcConfig: penalty_slope must be > 0");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("KcConfig: dt must be > 0");
}

// C dx/dt at x.
double rhs_at(double x, const CostSurface& cost,
              std::pair<double, double> bounds, const KcConfig& cfg) {
  const double grad = cost.grad(x);
  if (!std::isfinite(grad))
    throw NonFiniteCostError("kc: cost surface returned non-finite gradient");
  const double f1 = bounds.second - x;  // df1/dx = -1
  const double f2 = x - bounds.first;   // df2/dx = +1
  const double i1 = penalty(f1, cfg);
  const double i2 = penalty(f2, cfg);
  return -grad + i1 - i2 - cfg.g * x;
}

}  // namespace

double penalty(double v, const KcConfig& cfg) {
  return v < 0.0 ? cfg.penalty_slope * v : 0.0;
}

KcState step(const KcState& state, const CostSurface& cost,
             std::pair<double, double> bounds, const KcConfig& cfg) {
  check_cfg(cfg);
  if (!(bounds.first < bounds.second))
    throw std::invalid_argument("kc step: need lo < hi");
  const double rhs = rhs_at(state.x, cost, bounds, cfg);
  KcState next = state;
  next.x = state.x + (cfg.dt / cfg.c) * rhs;
  next.step_count = state.step_count + 1;
  next.converged = std::abs(rhs / cfg.c) < cfg.tol;
  return next;
}

KcState run_to_convergence(double x0, const CostSurface& cost,
                           std::pair<double, double> bounds,
                           const KcConfig& cfg) {
  std::vector<KcTrajectoryPoint> unused;
  return run_recorded(x0, cost, bounds, cfg, 0, unused);
}

KcState run_recorded(double x0, const CostSurface& cost,
                     std::pair<double, double> bounds, const KcConfig& cfg,
                     long stride, std::vector<KcTrajectoryPoint>& out) {
  check_cfg(cfg);
  if (!(bounds.first < bounds.second))
    throw std::invalid_argument("kc: need lo < hi");
  if (!std::isfinite(x0)) throw std::invalid_argument("kc: x0 must be finite");

  KcState state;
  state.x = x0;
  while (state.step_count < cfg.max_steps) {
    const double rhs = rhs_at(state.x, cost, bounds, cfg);
    if (stride > 0 && state.step_count % stride == 0)
      out.push_back({state.step_count, state.x, rhs});
    if (std::abs(rhs / cfg.c) < cfg.tol) {
      state.converged = true;
      return state;
    }
    state.x += (cfg.dt / cfg.c) * rhs;
    ++state.step_count;
  }
  state.converged =
      std::abs(rhs_at(state.x, cost, bounds, cfg) / cfg.c) < cfg.tol;
  return state;
}

}  // namespace senseopt
