// senseopt: sensing-time optimization workbench for a sequential-handover
// cognitive link. Subcommands cover the analytic model (sweep, optimize,
// tradeoff), the slot-level simulator (simulate), the learning loop
// (learn) and a self-check suite (validate).
//
// Exit codes: 0 success, 1 usage/config error, 2 infeasible scenario,
// 3 validation failure, 4 output I/O error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "senseopt/adaptive.hpp"
#include "senseopt/config.hpp"
#include "senseopt/errors.hpp"
#include "senseopt/kernels/sample_kernels.hpp"
#include "senseopt/optimizer.hpp"
#include "senseopt/qfunc.hpp"
#include "senseopt/simenv.hpp"

namespace {

using nlohmann::json;
using namespace senseopt;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; keeps CSV output byte-stable.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("error writing output file: " + path);
}

// Scenario with the channel count changed; p_free cycled or truncated.
Scenario with_np(const Scenario& base, int np) {
  Scenario s = base;
  s.np = np;
  s.p_free.resize(static_cast<std::size_t>(np));
  for (int k = 0; k < np; ++k)
    s.p_free[static_cast<std::size_t>(k)] =
        base.p_free[static_cast<std::size_t>(k) % base.p_free.size()];
  return s;
}

int cmd_sweep(const AppConfig& cfg, double tau_start, double tau_end,
              int points, const std::string& out_path,
              const std::vector<int>& np_list) {
  const Scenario& scn = cfg.scenario;
  if (!(tau_start > 0.0 && tau_end < scn.slot_t && tau_start <= tau_end))
    throw std::invalid_argument("sweep: need 0 < tau-start <= tau-end < T");
  if (points < 1) throw std::invalid_argument("sweep: points must be >= 1");

  std::vector<Scenario> scns;
  if (np_list.empty()) {
    scns.push_back(scn);
  } else {
    for (int np : np_list) {
      if (np < 1) throw std::invalid_argument("sweep: np-list entries must be >= 1");
      scns.push_back(with_np(scn, np));
    }
  }

  auto out = open_out(out_path);
  out << "tau,tau_over_T";
  if (np_list.empty()) {
    out << ",rate,alpha,nce";
  } else {
    for (int np : np_list)
      out << ",rate_np" << np << ",alpha_np" << np << ",nce_np" << np;
  }
  out << "\n";

  for (int i = 0; i < points; ++i) {
    const double tau =
        points == 1
            ? tau_start
            : tau_start + (tau_end - tau_start) * i / (points - 1);
    out << fmt(tau) << "," << fmt(tau / scn.slot_t);
    for (const Scenario& s : scns) {
      const ThroughputPoint pt = throughput(s, tau);
      out << "," << fmt(pt.rate) << "," << pt.alpha << "," << fmt(pt.nce);
    }
    out << "\n";
  }
  finish_out(out, out_path);
  return kExitOk;
}

int cmd_optimize(const AppConfig& cfg) {
  const OptimizationResult r = optimize_tau(cfg.scenario);
  const LResult lr = max_throughput_L(cfg.scenario);
  const double c0 = capacities(cfg.scenario.gamma_s, cfg.scenario.gamma_p).first;
  json j;
  j["tau_opt"] = r.tau_opt;
  j["rate_max"] = r.rate_max;
  j["rate_max_normalized"] = r.rate_max / c0;
  j["alpha_opt"] = r.alpha_at_opt;
  j["nce"] = r.nce_at_opt;
  j["L"] = lr.l;
  j["L_normalized"] = lr.l / c0;
  j["tau_opt_L"] = lr.tau_opt;
  j["np_star"] = lr.np_star;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_tradeoff(const AppConfig& cfg, double tf) {
  const TradeoffResult r = optimize_tau_tf(cfg.scenario, tf);
  const LResult lr = max_throughput_L(cfg.scenario);
  const double c0 = capacities(cfg.scenario.gamma_s, cfg.scenario.gamma_p).first;
  json j;
  j["tf"] = r.tf;
  j["alpha_bar"] = r.alpha_bar;
  j["tau_opt_tf"] = r.tau_opt_tf;
  j["rate_tf"] = r.rate_tf;
  j["rate_tf_normalized"] = r.rate_tf / c0;
  j["rate_tf_over_L"] = r.rate_tf / lr.l;
  j["nce_tf"] = r.nce_tf;
  j["L"] = lr.l;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_learn(const AppConfig& cfg, const std::string& out_path,
              const std::string& net_out_path) {
  const AdaptiveResult res = run_adaptive(cfg.scenario, cfg.adaptive);

  auto out = open_out(out_path);
  out << "cycle,tau_applied,phi_measured,mse_after_training,kc_x\n";
  for (const CycleRecord& r : res.records)
    out << r.cycle << "," << fmt(r.tau_applied) << "," << fmt(r.phi_measured)
        << "," << fmt(r.mse_after_training) << "," << fmt(r.kc_x) << "\n";
  finish_out(out, out_path);

  if (!net_out_path.empty()) {
    auto net_out = open_out(net_out_path);
    save_network(net_out, res.network);
    finish_out(net_out, net_out_path);
  }

  const double c0 = capacities(cfg.scenario.gamma_s, cfg.scenario.gamma_p).first;
  json j;
  j["cycles"] = cfg.adaptive.cycles;
  j["seed"] = cfg.adaptive.seed;
  j["tau_learned"] = res.tau_learned;
  j["rate_learned"] = res.rate_learned;
  j["rate_learned_normalized"] = res.rate_learned / c0;
  j["trace"] = out_path;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_simulate(const AppConfig& cfg, double tau, long slots,
                 std::uint64_t seed, const std::string& out_path) {
  const Scenario& scn = cfg.scenario;
  if (slots < 1) throw std::invalid_argument("simulate: slots must be >= 1");
  if (!(tau > 0.0 && tau < scn.slot_t))
    throw std::invalid_argument("simulate: tau outside (0, T)");

  SimRng rng(seed);
  auto out = open_out(out_path);
  out << "slot,m,transmitted,channel,true_state,rate\n";
  double rate_sum = 0.0;
  double sensed_sum = 0.0;
  for (long i = 0; i < slots; ++i) {
    const SlotTrace t =
        run_slot(scn, tau, rng, cfg.adaptive.estimator.decision_mode);
    rate_sum += t.rate_achieved;
    sensed_sum += t.channels_sensed;
    out << i << "," << t.handovers << "," << (t.transmitted ? 1 : 0) << ","
        << (t.channel_used ? *t.channel_used : -1) << ","
        << (t.true_state_of_used
                ? (*t.true_state_of_used == Hypothesis::busy ? "busy" : "free")
                : "-")
        << "," << fmt(t.rate_achieved) << "\n";
  }
  finish_out(out, out_path);

  const ThroughputPoint pt = throughput(scn, tau);
  json j;
  j["slots"] = slots;
  j["seed"] = seed;
  j["tau"] = tau;
  j["mean_rate"] = rate_sum / static_cast<double>(slots);
  j["mean_sensed_channels"] = sensed_sum / static_cast<double>(slots);
  j["analytic_rate"] = pt.rate;
  j["analytic_sensed_channels"] = pt.nce;
  j["trace"] = out_path;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// --- validate: Monte-Carlo-vs-analytic and gradient-vs-finite-difference
// self checks, each printed with its measured deviation.

struct CheckReport {
  bool ok = true;
  void line(bool pass, const std::string& name, const std::string& detail) {
    std::cout << (pass ? "[ok]   " : "[FAIL] ") << name << ": " << detail
              << "\n";
    ok = ok && pass;
  }
};

int cmd_validate(const AppConfig& cfg, std::uint64_t seed) {
  CheckReport rep;
  const DetectorConfig det = cfg.scenario.detector;

  {  // sample-level detector vs closed forms (3 binomial sd gate)
    const double tau = 2e-3;
    const double lambda = lambda_for_pd_min(det, tau);
    const long trials = 20000;
    kernels::Xoshiro256x4 rng(seed);
    long fa = 0, hit = 0;
    for (long i = 0; i < trials; ++i) {
      fa += ed_decide(det, tau, lambda, Hypothesis::idle, rng) == Decision::busy;
      hit += ed_decide(det, tau, lambda, Hypothesis::busy, rng) == Decision::busy;
    }
    const double pfa_cf = false_alarm_prob(det, tau, lambda);
    const double pd_cf = detection_prob(det, tau, lambda);
    const double sd_fa = std::sqrt(pfa_cf * (1 - pfa_cf) / trials);
    const double sd_d = std::sqrt(pd_cf * (1 - pd_cf) / trials);
    const double dev_fa = std::abs(fa / double(trials) - pfa_cf) / sd_fa;
    const double dev_d = std::abs(hit / double(trials) - pd_cf) / sd_d;
    rep.line(dev_fa < 3.0 && dev_d < 3.0, "energy detector vs Q-function forms",
             "dPfa=" + fmt(dev_fa) + "sd dPd=" + fmt(dev_d) + "sd");
  }

  {  // slot simulator vs analytic throughput / sensed-channel count
    Scenario scn = with_np(cfg.scenario, std::min(cfg.scenario.np, 3));
    const double tau = 0.12 * scn.slot_t;
    const long slots = 200000;
    SimRng rng(seed ^ 0x51eedULL);
    double rsum = 0, r2 = 0, ssum = 0, s2 = 0;
    for (long i = 0; i < slots; ++i) {
      const SlotTrace t = run_slot(scn, tau, rng);
      rsum += t.rate_achieved;
      r2 += t.rate_achieved * t.rate_achieved;
      ssum += t.channels_sensed;
      s2 += double(t.channels_sensed) * t.channels_sensed;
    }
    const ThroughputPoint pt = throughput(scn, tau);
    const double mr = rsum / slots, ms = ssum / slots;
    const double se_r = std::sqrt((r2 / slots - mr * mr) / slots);
    const double se_s = std::sqrt((s2 / slots - ms * ms) / slots);
    const double dev_r = std::abs(mr - pt.rate) / se_r;
    const double dev_s = std::abs(ms - pt.nce) / se_s;
    rep.line(dev_r < 3.0 && dev_s < 3.0, "slot simulator vs analytic model",
             "drate=" + fmt(dev_r) + "se dsensed=" + fmt(dev_s) + "se");
  }

  {  // mff sensitivity + loss gradient vs central finite differences
    double worst_s = 0.0, worst_g = 0.0;
    kernels::Xoshiro256pp rng(seed ^ 0xABCDULL);
    for (int trial = 0; trial < 20; ++trial) {
      MffNetwork net = MffNetwork::init(9, 1.0, rng.next());
      for (auto& v : net.w1) v = 2.0 * rng.uniform01() - 1.0;
      for (auto& v : net.b1) v = 2.0 * rng.uniform01() - 1.0;
      for (auto& v : net.w2) v = 2.0 * rng.uniform01() - 1.0;
      const double x = 1.8 * rng.uniform01() - 0.9;
      const double h = 1e-6;
      const double fd = (forward(net, x + h) - forward(net, x - h)) / (2 * h);
      const double an = sensitivity(net, x);
      worst_s = std::max(worst_s, std::abs(an - fd) /
                                      std::max({std::abs(an), std::abs(fd), 1e-4}));
      const double target = 2.0 * rng.uniform01() - 1.0;
      const auto grad = loss_gradient(net, x, target);
      auto loss_at = [&](MffNetwork n) {
        const double e = forward(n, x) - target;
        return 0.5 * e * e;
      };
      for (std::size_t p = 0; p < grad.size(); ++p) {
        MffNetwork up = net, dn = net;
        auto& pu = p < net.w1.size() ? up.w1[p]
                   : p < 2 * net.w1.size() ? up.b1[p - net.w1.size()]
                   : p < 3 * net.w1.size() ? up.w2[p - 2 * net.w1.size()]
                                           : up.b2;
        auto& pd = p < net.w1.size() ? dn.w1[p]
                   : p < 2 * net.w1.size() ? dn.b1[p - net.w1.size()]
                   : p < 3 * net.w1.size() ? dn.w2[p - 2 * net.w1.size()]
                                           : dn.b2;
        pu += h;
        pd -= h;
        const double fdg = (loss_at(up) - loss_at(dn)) / (2 * h);
        worst_g = std::max(worst_g, std::abs(grad[p] - fdg) /
                                        std::max({std::abs(grad[p]),
                                                  std::abs(fdg), 1e-4}));
      }
    }
    rep.line(worst_s < 1e-5, "mff sensitivity vs finite differences",
             "max rel err " + fmt(worst_s));
    rep.line(worst_g < 1e-4, "mff backprop gradient vs finite differences",
             "max rel err " + fmt(worst_g));
  }

  {  // gradient flow on a quadratic bowl and an infeasible minimum
    struct Bowl final : CostSurface {
      double c;
      explicit Bowl(double center) : c(center) {}
      double eval(double x) const override { return (x - c) * (x - c); }
      double grad(double x) const override { return 2.0 * (x - c); }
    };
    KcConfig kc = cfg.adaptive.kc;
    kc.g = 0.0;
    const KcState in = run_to_convergence(0.9, Bowl(0.3), {0.0, 1.0}, kc);
    const double dev_in = std::abs(in.x - 0.3);
    const KcState out = run_to_convergence(0.9, Bowl(1.5), {0.0, 1.0}, kc);
    const double x_star =
        (2.0 * 1.5 + kc.penalty_slope) / (2.0 + kc.penalty_slope);
    const double dev_out = std::abs(out.x - x_star);
    rep.line(dev_in < 1e-3 && dev_out < 1e-3, "gradient flow equilibria",
             "bowl dev " + fmt(dev_in) + ", penalty-layer dev " + fmt(dev_out));
  }

  {  // kernel backends agree bit-for-bit on the same stream
    kernels::Xoshiro256x4 a(seed), b(seed);
    const double s_scalar =
        kernels::neg_log_uniform_sum(kernels::Backend::scalar, a, 12345);
    const double s_active = kernels::neg_log_uniform_sum(b, 12345);
    rep.line(s_scalar == s_active,
             std::string("sampling kernels (") +
                 kernels::backend_name(kernels::active_backend()) + ")",
             "scalar/active diff " + fmt(std::abs(s_scalar - s_active)));
  }

  return rep.ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum sensing-time optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON config file (defaults apply when omitted)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Throughput vs sensing time CSV");
  double tau_start = 0.0, tau_end = 0.0;
  int points = 200;
  std::string sweep_out;
  std::vector<int> np_list;
  sweep->add_option("--tau-start", tau_start, "Sweep start, seconds")->required();
  sweep->add_option("--tau-end", tau_end, "Sweep end, seconds")->required();
  sweep->add_option("--points", points, "Grid points (default 200)");
  sweep->add_option("-o,--out", sweep_out, "Output CSV path")->required();
  sweep->add_option("--np-list", np_list,
                    "Overlay columns for these channel counts")
      ->delimiter(',');

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Solve for the optimal sensing time");

  // tradeoff
  auto* tradeoff = app.add_subcommand("tradeoff", "Energy-throughput tradeoff point");
  double tf = 1.0;
  tradeoff->add_option("--tf", tf, "Tradeoff factor in [0,1]")->required();

  // learn
  auto* learn = app.add_subcommand("learn", "Run the learning loop");
  std::string learn_out, net_out;
  long learn_cycles = -1;
  std::int64_t learn_seed = -1;
  learn->add_option("-o,--out", learn_out, "Cycle trace CSV path")->required();
  learn->add_option("--net-out", net_out, "Also write the final network snapshot");
  learn->add_option("--cycles", learn_cycles, "Override config cycle count");
  learn->add_option("--seed", learn_seed, "Override config seed");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Slot-level Monte Carlo trace");
  double sim_tau = 0.0;
  long sim_slots = 10000;
  std::int64_t sim_seed = -1;
  std::string sim_out;
  simulate->add_option("--tau", sim_tau, "Sensing time, seconds")->required();
  simulate->add_option("--slots", sim_slots, "Slot count (default 10000)");
  simulate->add_option("--seed", sim_seed, "Override config seed");
  simulate->add_option("-o,--out", sim_out, "Trace CSV path")->required();

  // validate
  auto* validate = app.add_subcommand("validate", "Run the self-check suite");
  std::int64_t val_seed = -1;
  validate->add_option("--seed", val_seed, "Override config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    AppConfig cfg = load_config(config_path);
    if (sweep->parsed())
      return cmd_sweep(cfg, tau_start, tau_end, points, sweep_out, np_list);
    if (optimize->parsed()) return cmd_optimize(cfg);
    if (tradeoff->parsed()) return cmd_tradeoff(cfg, tf);
    if (learn->parsed()) {
      if (learn_cycles > 0) cfg.adaptive.cycles = static_cast<int>(learn_cycles);
      if (learn_seed >= 0) cfg.adaptive.seed = static_cast<std::uint64_t>(learn_seed);
      return cmd_learn(cfg, learn_out, net_out);
    }
    if (simulate->parsed()) {
      const std::uint64_t seed = sim_seed >= 0
                                     ? static_cast<std::uint64_t>(sim_seed)
                                     : cfg.adaptive.seed;
      return cmd_simulate(cfg, sim_tau, sim_slots, seed, sim_out);
    }
    if (validate->parsed()) {
      const std::uint64_t seed = val_seed >= 0
                                     ? static_cast<std::uint64_t>(val_seed)
                                     : cfg.adaptive.seed;
      return cmd_validate(cfg, seed);
    }
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
