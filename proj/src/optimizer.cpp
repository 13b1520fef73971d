#include "senseopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "senseopt/errors.hpp"

namespace senseopt {

namespace {

constexpr double kEdgeEps = 1e-9;    // strict-inequality margin, seconds
constexpr double kGoldenTol = 1e-7;  // golden-section bracket width, seconds
constexpr int kGridPoints = 10000;

// Throughput with the cap clamped to alpha(tau); terms beyond alpha(tau)
// have nonpositive time factors, so the clamp changes nothing but keeps
// the public precondition satisfied across a tau sweep.
double rate_at(const Scenario& scn, double tau, std::optional<int> cap) {
  std::optional<int> eff;
  if (cap) eff = std::min(*cap, max_handover(scn, tau));
  return throughput(scn, tau, eff).rate;
}

struct GoldenResult {
  double x;
  double value;
};

// Maximizes f on [a, b] by golden-section to bracket width tol.
template <typename F>
GoldenResult golden_max(F&& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

// Coarse scan then golden-section around the best coarse point. Guards
// golden-section's unimodality assumption within a segment.
template <typename F>
GoldenResult scan_then_golden(F&& f, double a, double b, int coarse) {
  double best_x = a;
  double best_v = f(a);
  std::vector<double> xs(static_cast<std::size_t>(coarse) + 1);
  for (int i = 0; i <= coarse; ++i) {
    const double x = a + (b - a) * i / coarse;
    xs[static_cast<std::size_t>(i)] = x;
    const double v = i == 0 ? best_v : f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const auto it = std::lower_bound(xs.begin(), xs.end(), best_x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double lo = i == 0 ? a : xs[i - 1];
  const double hi = i + 1 >= xs.size() ? b : xs[i + 1];
  const GoldenResult g = golden_max(f, lo, hi, kGoldenTol);
  return g.value >= best_v ? g : GoldenResult{best_x, best_v};
}

}  // namespace

OptimizationResult optimize_tau(const Scenario& scn,
                                std::optional<int> cap_override) {
  scn.validate();
  if (cap_override && *cap_override < 0)
    throw std::invalid_argument("optimize_tau: cap_override must be >= 0");

  const double tmin = tau_min(scn.detector);
  const double t_slot = scn.slot_t;
  if (!(tmin < t_slot))
    throw InfeasibleError("optimize_tau: tau_min >= slot duration");

  const double lo = tmin + kEdgeEps;
  const double hi = t_slot - kEdgeEps;
  if (!(lo < hi)) throw InfeasibleError("optimize_tau: empty feasible interval");

  const auto f = [&](double tau) { return rate_at(scn, tau, cap_override); };

  // Segment edges: tau_a = (T - a*tau_ho)/(a+1), where floor((T-tau)/(tau+tau_ho))
  // crosses from a to a-1.
  std::vector<double> edges{lo};
  for (int a = 1;; ++a) {
    const double tau_a = (t_slot - a * scn.tau_ho) / (a + 1);
    if (tau_a <= lo) break;
    if (tau_a < hi) edges.push_back(tau_a);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());

  double best_x = lo;
  double best_v = f(lo);
  int segments = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] - edges[i] < 2 * kEdgeEps) continue;
    ++segments;
    const GoldenResult g = scan_then_golden(f, edges[i], edges[i + 1], 32);
    if (g.value > best_v) {
      best_v = g.value;
      best_x = g.x;
    }
  }

  // Uniform-grid backstop with a local polish around the best grid point.
  const double step = (hi - lo) / (kGridPoints - 1);
  double grid_best_x = lo;
  double grid_best_v = best_v;
  bool grid_improved = false;
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = lo + step * i;
    const double v = f(x);
    if (v > grid_best_v) {
      grid_best_v = v;
      grid_best_x = x;
      grid_improved = true;
    }
  }
  if (grid_improved) {
    const GoldenResult g =
        golden_max(f, std::max(lo, grid_best_x - step),
                   std::min(hi, grid_best_x + step), kGoldenTol);
    if (g.value > grid_best_v) {
      grid_best_v = g.value;
      grid_best_x = g.x;
    }
    best_v = grid_best_v;
    best_x = grid_best_x;
  }

  std::optional<int> eff;
  if (cap_override) eff = std::min(*cap_override, max_handover(scn, best_x));
  const ThroughputPoint pt = throughput(scn, best_x, eff);
  return OptimizationResult{best_x, pt.rate, pt.alpha, pt.nce, segments};
}

Scenario extend_to_saturation(const Scenario& scn) {
  const int np_star = np_saturation_threshold(scn);
  if (scn.np >= np_star) return scn;
  Scenario ext = scn;
  ext.np = np_star;
  ext.p_free.resize(static_cast<std::size_t>(np_star));
  for (int k = scn.np; k < np_star; ++k)
    ext.p_free[static_cast<std::size_t>(k)] =
        scn.p_free[static_cast<std::size_t>(k % scn.np)];
  return ext;
}

LResult max_throughput_L(const Scenario& scn) {
  const Scenario ext = extend_to_saturation(scn);
  const OptimizationResult r = optimize_tau(ext);
  return LResult{r.rate_max, r.tau_opt, max_handover(ext, r.tau_opt),
                 np_saturation_threshold(scn)};
}

int tf_to_alpha_bar(const Scenario& scn, double tf) {
  if (!(tf >= 0.0 && tf <= 1.0))
    throw std::invalid_argument("tf_to_alpha_bar: tf must be in [0,1]");
  const Scenario ext = extend_to_saturation(scn);
  const LResult lr = max_throughput_L(scn);
  const double target = tf * lr.l - 1e-9 * std::max(lr.l, 1.0);
  for (int cap = 0; cap < lr.alpha_opt; ++cap) {
    if (optimize_tau(ext, cap).rate_max >= target) return cap;
  }
  return lr.alpha_opt;
}

TradeoffResult optimize_tau_tf(const Scenario& scn, double tf) {
  const int alpha_bar = tf_to_alpha_bar(scn, tf);
  const Scenario ext = extend_to_saturation(scn);
  const OptimizationResult r = optimize_tau(ext, alpha_bar);
  return TradeoffResult{tf, alpha_bar, r.tau_opt, r.rate_max, r.nce_at_opt};
}

}  // namespace senseopt
