#pragma once

#include <string>

#include "senseopt/adaptive.hpp"
#include "senseopt/link_model.hpp"

namespace senseopt {

struct PowerModel {
  double p_sense = 1.0;  // watts spent sensing
  double p_ho = 0.0;     // watts spent during a handover
};

/// Everything a CLI run needs, in one document. Every field is optional in
/// the JSON; absent fields take the Table-style defaults baked into the
/// struct initializers.
struct AppConfig {
  Scenario scenario;      // includes the detector block
  PowerModel power;
  AdaptiveConfig adaptive;  // includes estimator, mff and kc blocks

  void validate() const;
};

/// Parse-then-validate. Unknown keys anywhere in the document are
/// rejected. An empty document yields the defaults exactly.
AppConfig parse_config(const std::string& json_text);

/// Load from a file path; empty path returns the defaults.
AppConfig load_config(const std::string& path);

/// Serialize (round-trips through parse_config).
std::string config_to_json(const AppConfig& cfg);

}  // namespace senseopt
