#include "senseopt/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace senseopt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

// Typo safety: every object may only contain keys we know about.
void check_keys(const json& j, const char* ctx,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(std::string("unknown key \"") + item.key() + "\" in " + ctx);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_detector(const json& j, DetectorConfig& d) {
  check_keys(j, "detector", {"fs_hz", "pd_min", "pfa_max", "gamma", "sigma_z2"});
  read(j, "fs_hz", d.fs);
  read(j, "pd_min", d.pd_min);
  read(j, "pfa_max", d.pfa_max);
  read(j, "gamma", d.gamma);
  read(j, "sigma_z2", d.sigma_z2);
}

void parse_fading(const json& j, FadingConfig& f) {
  check_keys(j, "fading", {"mode", "mean_gamma_s", "mean_gamma_p"});
  if (j.contains("mode")) {
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "none")
      f.mode = FadingMode::none;
    else if (mode == "rayleigh")
      f.mode = FadingMode::rayleigh;
    else
      fail("fading.mode must be \"none\" or \"rayleigh\"");
  }
  read(j, "mean_gamma_s", f.mean_gamma_s);
  read(j, "mean_gamma_p", f.mean_gamma_p);
}

void parse_scenario(const json& j, Scenario& s) {
  check_keys(j, "scenario",
             {"np", "slot_t_s", "tau_ho_s", "p_free", "gamma_s", "gamma_p",
              "fading"});
  read(j, "np", s.np);
  read(j, "slot_t_s", s.slot_t);
  read(j, "tau_ho_s", s.tau_ho);
  if (j.contains("p_free")) {
    const json& p = j.at("p_free");
    if (p.is_number()) {
      s.p_free.assign(static_cast<std::size_t>(s.np), p.get<double>());
    } else if (p.is_array()) {
      s.p_free = p.get<std::vector<double>>();
    } else {
      fail("scenario.p_free must be a number or an array");
    }
  } else if (j.contains("np")) {
    // np changed with p_free left at defaults: cycle the default list.
    const std::vector<double> base = Scenario{}.p_free;
    s.p_free.resize(static_cast<std::size_t>(s.np));
    for (int k = 0; k < s.np; ++k)
      s.p_free[static_cast<std::size_t>(k)] =
          base[static_cast<std::size_t>(k) % base.size()];
  }
  read(j, "gamma_s", s.gamma_s);
  read(j, "gamma_p", s.gamma_p);
  if (j.contains("fading")) parse_fading(j.at("fading"), s.fading);
}

void parse_power(const json& j, PowerModel& p) {
  check_keys(j, "power", {"p_sense_w", "p_ho_w"});
  read(j, "p_sense_w", p.p_sense);
  read(j, "p_ho_w", p.p_ho);
}

void parse_estimator(const json& j, EstimatorConfig& e) {
  check_keys(j, "estimator", {"t_ep_slots", "decision_mode"});
  read(j, "t_ep_slots", e.t_ep_slots);
  if (j.contains("decision_mode")) {
    const auto mode = j.at("decision_mode").get<std::string>();
    if (mode == "closed_form")
      e.decision_mode = DecisionMode::closed_form;
    else if (mode == "sample_level")
      e.decision_mode = DecisionMode::sample_level;
    else
      fail("estimator.decision_mode must be \"closed_form\" or \"sample_level\"");
  }
}

void parse_mff(const json& j, MffHyper& m) {
  check_keys(j, "mff",
             {"hidden_neurons", "learning_rate", "warmup_epochs",
              "epochs_per_cycle", "buffer_capacity"});
  read(j, "hidden_neurons", m.k);
  read(j, "learning_rate", m.learning_rate);
  read(j, "warmup_epochs", m.warmup_epochs);
  read(j, "epochs_per_cycle", m.epochs_per_cycle);
  read(j, "buffer_capacity", m.buffer_capacity);
}

void parse_kc(const json& j, KcConfig& k) {
  check_keys(j, "kc",
             {"c_farads", "g_siemens", "penalty_slope", "dt_s", "max_steps",
              "tol_v_per_s"});
  read(j, "c_farads", k.c);
  read(j, "g_siemens", k.g);
  read(j, "penalty_slope", k.penalty_slope);
  read(j, "dt_s", k.dt);
  read(j, "max_steps", k.max_steps);
  read(j, "tol_v_per_s", k.tol);
}

void parse_adaptive(const json& j, AdaptiveConfig& a) {
  check_keys(j, "adaptive",
             {"cycles", "warmup_probes", "jitter", "jitter_halflife_cycles",
              "seed"});
  read(j, "cycles", a.cycles);
  read(j, "warmup_probes", a.warmup_probes);
  read(j, "jitter", a.jitter);
  read(j, "jitter_halflife_cycles", a.jitter_halflife_cycles);
  read(j, "seed", a.seed);
}

}  // namespace

void AppConfig::validate() const {
  scenario.validate();
  if (power.p_sense <= 0.0) fail("power.p_sense_w must be positive");
  if (power.p_ho < 0.0) fail("power.p_ho_w must be nonnegative");
  if (adaptive.estimator.t_ep_slots < 1) fail("estimator.t_ep_slots must be >= 1");
  if (adaptive.cycles < 1) fail("adaptive.cycles must be >= 1");
  if (adaptive.warmup_probes < 2) fail("adaptive.warmup_probes must be >= 2");
  if (adaptive.jitter < 0.0) fail("adaptive.jitter must be nonnegative");
  if (adaptive.jitter_halflife_cycles < 1)
    fail("adaptive.jitter_halflife_cycles must be >= 1");
  if (adaptive.mff.k < 1) fail("mff.hidden_neurons must be >= 1");
  if (adaptive.mff.learning_rate <= 0.0) fail("mff.learning_rate must be positive");
  if (adaptive.mff.warmup_epochs < 1) fail("mff.warmup_epochs must be >= 1");
  if (adaptive.mff.epochs_per_cycle < 1) fail("mff.epochs_per_cycle must be >= 1");
  if (adaptive.mff.buffer_capacity < 1) fail("mff.buffer_capacity must be >= 1");
  if (adaptive.kc.c <= 0.0) fail("kc.c_farads must be positive");
  if (adaptive.kc.g < 0.0) fail("kc.g_siemens must be nonnegative");
  if (adaptive.kc.penalty_slope <= 0.0) fail("kc.penalty_slope must be positive");
  if (adaptive.kc.dt <= 0.0) fail("kc.dt_s must be positive");
  if (adaptive.kc.max_steps < 1) fail("kc.max_steps must be >= 1");
  if (adaptive.kc.tol <= 0.0) fail("kc.tol_v_per_s must be positive");
}

AppConfig parse_config(const std::string& json_text) {
  AppConfig cfg;

  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be a JSON object");
  check_keys(j, "top level",
             {"detector", "scenario", "power", "estimator", "mff", "kc",
              "adaptive"});

  if (j.contains("detector")) parse_detector(j.at("detector"), cfg.scenario.detector);
  if (j.contains("scenario")) parse_scenario(j.at("scenario"), cfg.scenario);
  if (j.contains("power")) parse_power(j.at("power"), cfg.power);
  if (j.contains("estimator")) parse_estimator(j.at("estimator"), cfg.adaptive.estimator);
  if (j.contains("mff")) parse_mff(j.at("mff"), cfg.adaptive.mff);
  if (j.contains("kc")) parse_kc(j.at("kc"), cfg.adaptive.kc);
  if (j.contains("adaptive")) parse_adaptive(j.at("adaptive"), cfg.adaptive);

  cfg.validate();
  return cfg;
}

AppConfig load_config(const std::string& path) {
  if (path.empty()) return parse_config("{}");
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const AppConfig& cfg) {
  json j;
  const Scenario& s = cfg.scenario;
  j["detector"] = {{"fs_hz", s.detector.fs},
                   {"pd_min", s.detector.pd_min},
                   {"pfa_max", s.detector.pfa_max},
                   {"gamma", s.detector.gamma},
                   {"sigma_z2", s.detector.sigma_z2}};
  j["scenario"] = {
      {"np", s.np},
      {"slot_t_s", s.slot_t},
      {"tau_ho_s", s.tau_ho},
      {"p_free", s.p_free},
      {"gamma_s", s.gamma_s},
      {"gamma_p", s.gamma_p},
      {"fading",
       {{"mode", s.fading.mode == FadingMode::rayleigh ? "rayleigh" : "none"},
        {"mean_gamma_s", s.fading.mean_gamma_s},
        {"mean_gamma_p", s.fading.mean_gamma_p}}}};
  j["power"] = {{"p_sense_w", cfg.power.p_sense}, {"p_ho_w", cfg.power.p_ho}};
  j["estimator"] = {
      {"t_ep_slots", cfg.adaptive.estimator.t_ep_slots},
      {"decision_mode",
       cfg.adaptive.estimator.decision_mode == DecisionMode::sample_level
           ? "sample_level"
           : "closed_form"}};
  j["mff"] = {{"hidden_neurons", cfg.adaptive.mff.k},
              {"learning_rate", cfg.adaptive.mff.learning_rate},
              {"warmup_epochs", cfg.adaptive.mff.warmup_epochs},
              {"epochs_per_cycle", cfg.adaptive.mff.epochs_per_cycle},
              {"buffer_capacity", cfg.adaptive.mff.buffer_capacity}};
  j["kc"] = {{"c_farads", cfg.adaptive.kc.c},
             {"g_siemens", cfg.adaptive.kc.g},
             {"penalty_slope", cfg.adaptive.kc.penalty_slope},
             {"dt_s", cfg.adaptive.kc.dt},
             {"max_steps", cfg.adaptive.kc.max_steps},
             {"tol_v_per_s", cfg.adaptive.kc.tol}};
  j["adaptive"] = {{"cycles", cfg.adaptive.cycles},
                   {"warmup_probes", cfg.adaptive.warmup_probes},
                   {"jitter", cfg.adaptive.jitter},
                   {"jitter_halflife_cycles", cfg.adaptive.jitter_halflife_cycles},
                   {"seed", cfg.adaptive.seed}};
  return j.dump(2) + "\n";
}

}  // namespace senseopt
