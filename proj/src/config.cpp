// SPDX-License-Identifier: Apache-2.0
//
// pcsim — multi-cell massive MIMO downlink simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pcsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pcsim/errors.hpp"

namespace pcsim {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

double finite_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("config key '" + key + "' must be finite");
  return x;
}

}  // namespace

void SystemConfig::validate() const {
  require(num_cells >= 1, "num_cells must be >= 1");
  require(users_per_cell >= 1, "users_per_cell must be >= 1");
  require(num_antennas >= 1, "num_antennas must be >= 1");
  require(uplink_pilot_snr > 0.0, "uplink_pilot_snr must be > 0");
  require(downlink_snr > 0.0, "downlink_snr must be > 0");
  require(noise_power > 0.0, "noise_power must be > 0");
  require(coherence_block >= 1, "coherence_block must be >= 1");
  require(pilot_reuse_factor >= 1, "pilot_reuse_factor must be >= 1");
  require(grouping_threshold > 0.0, "grouping_threshold must be > 0");
  require(cell_radius > 0.0, "cell_radius must be > 0");
  require(min_distance >= 0.0 && min_distance < cell_radius,
          "min_distance must lie in [0, cell_radius)");
  require(path_loss_exponent > 0.0, "path_loss_exponent must be > 0");
  require(shadowing_db >= 0.0, "shadowing_db must be >= 0");
  if (!grouping_enabled) {
    const long tp = long(pilot_reuse_factor) * users_per_cell;
    if (tp >= coherence_block) {
      throw PilotOverheadExceedsCoherence(
          "PilotOverheadExceedsCoherence: pilot length " + std::to_string(tp) +
          " >= coherence block " + std::to_string(coherence_block));
    }
  }
}

const char* to_string(NormalizationMode mode) {
  return mode == NormalizationMode::kStatistical ? "statistical"
                                                 : "per-realization";
}

const char* to_string(SinrMode mode) {
  return mode == SinrMode::kConsistent ? "consistent" : "paper";
}

SystemConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  SystemConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "num_cells") {
      cfg.num_cells = value.get<int>();
    } else if (key == "users_per_cell") {
      cfg.users_per_cell = value.get<int>();
    } else if (key == "num_antennas") {
      cfg.num_antennas = value.get<int>();
    } else if (key == "uplink_pilot_snr") {
      cfg.uplink_pilot_snr = finite_number(value, key);
    } else if (key == "downlink_snr") {
      cfg.downlink_snr = finite_number(value, key);
    } else if (key == "noise_power") {
      cfg.noise_power = finite_number(value, key);
    } else if (key == "coherence_block") {
      cfg.coherence_block = value.get<int>();
    } else if (key == "pilot_reuse_factor") {
      cfg.pilot_reuse_factor = value.get<int>();
    } else if (key == "grouping_threshold") {
      cfg.grouping_threshold = finite_number(value, key);
    } else if (key == "grouping_enabled") {
      if (!value.is_boolean()) throw ConfigError("grouping_enabled must be a bool");
      cfg.grouping_enabled = value.get<bool>();
    } else if (key == "normalization_mode") {
      const auto s = value.get<std::string>();
      if (s == "statistical") {
        cfg.normalization_mode = NormalizationMode::kStatistical;
      } else if (s == "per-realization") {
        cfg.normalization_mode = NormalizationMode::kPerRealization;
      } else {
        throw ConfigError("normalization_mode must be 'statistical' or 'per-realization'");
      }
    } else if (key == "sinr_mode") {
      const auto s = value.get<std::string>();
      if (s == "consistent") {
        cfg.sinr_mode = SinrMode::kConsistent;
      } else if (s == "paper") {
        cfg.sinr_mode = SinrMode::kPaper;
      } else {
        throw ConfigError("sinr_mode must be 'consistent' or 'paper'");
      }
    } else if (key == "cell_radius") {
      cfg.cell_radius = finite_number(value, key);
    } else if (key == "min_distance") {
      cfg.min_distance = finite_number(value, key);
    } else if (key == "path_loss_exponent") {
      cfg.path_loss_exponent = finite_number(value, key);
    } else if (key == "shadowing_db") {
      cfg.shadowing_db = finite_number(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pcsim
