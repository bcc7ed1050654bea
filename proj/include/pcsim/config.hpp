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

#pragma once

#include <cstdint>
#include <string>

namespace pcsim {

/// How precoder columns are scaled to unit power.
enum class NormalizationMode {
  kStatistical,     // E||b_k||^2 = 1 via deterministic variance-based scale
  kPerRealization,  // ||b_k|| = 1 exactly in every realization
};

/// Which closed-form SINR variant `sinr_closed_form` evaluates.
enum class SinrMode {
  kConsistent,  // matches the Monte Carlo bound term by term
  kPaper,       // non-coherent interference summed over estimate variances
};

/// Full system configuration.  Power quantities are linear ratios; the
/// uplink pilot SNR and downlink SNR are referenced to a user at the cell
/// radius (where the path gain is exactly 1).
struct SystemConfig {
  int num_cells = 7;        // L
  int users_per_cell = 10;  // K
  int num_antennas = 128;   // M
  double uplink_pilot_snr = 10.0;  // rho_tr, effective training SNR
  double downlink_snr = 10.0;      // rho_d, per-user downlink power
  double noise_power = 1.0;        // sigma^2, downlink data-phase noise
  int coherence_block = 200;       // T_c symbols
  int pilot_reuse_factor = 1;      // f
  double grouping_threshold = 1.0;  // tau
  bool grouping_enabled = false;
  NormalizationMode normalization_mode = NormalizationMode::kStatistical;
  SinrMode sinr_mode = SinrMode::kConsistent;

  // Propagation model.
  double cell_radius = 500.0;       // meters
  double min_distance = 35.0;       // meters
  double path_loss_exponent = 3.8;  // alpha
  double shadowing_db = 8.0;        // sigma_sh in dB; 0 disables shadowing

  /// Pilot overhead of the plain reuse-f book, as a fraction of the
  /// coherence block (the pre-log loss delta = f*K/T_c).
  double pilot_overhead_delta() const {
    return double(pilot_reuse_factor) * users_per_cell / coherence_block;
  }

  /// Throws ConfigError (or PilotOverheadExceedsCoherence) on any
  /// invariant violation.
  void validate() const;
};

const char* to_string(NormalizationMode mode);
const char* to_string(SinrMode mode);

/// Loads a JSON config file.  Keys mirror the SystemConfig field names;
/// unknown keys are an error.
SystemConfig load_config(const std::string& path);

/// Parses a JSON config from text (same rules as load_config).
SystemConfig parse_config(const std::string& json_text);

}  // namespace pcsim
