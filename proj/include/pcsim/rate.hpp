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
#include <vector>

#include "pcsim/config.hpp"
#include "pcsim/estimation.hpp"
#include "pcsim/grouping.hpp"
#include "pcsim/large_scale.hpp"
#include "pcsim/pilots.hpp"
#include "pcsim/precoding.hpp"

namespace pcsim {

/// Per-user SINRs.  Each grid is L x K; entries are NaN where the quantity
/// was not evaluated.  gamma_inf may be +infinity (contamination-free
/// users); it is never folded into arithmetic as a large float.
struct SinrReport {
  int num_cells = 0;
  int users_per_cell = 0;
  std::vector<std::vector<double>> gamma_mc;   // Monte Carlo, linear
  std::vector<std::vector<double>> gamma_cf;   // closed form, linear
  std::vector<std::vector<double>> gamma_inf;  // asymptotic ceiling, linear
  std::vector<std::vector<double>> ci95;       // 95% CI half-width, gamma_mc
};

/// Per-user and aggregate achievable rates, rate = prelog * log2(1 + gamma).
struct RateReport {
  double prelog = 1.0;
  int pilot_length = 0;
  std::vector<std::vector<double>> rate_mc;  // bits/s/Hz, NaN if unevaluated
  std::vector<std::vector<double>> rate_cf;
  std::vector<double> cell_rate_mc;  // per-cell sums
  std::vector<double> cell_rate_cf;
  double total_mc = 0.0;  // network sums
  double total_cf = 0.0;
  GroupingResult grouping;
  bool grouping_applied = false;
  SystemConfig config_echo;
  uint64_t seed = 0;
  SinrReport sinr;
};

/// Closed-form downlink SINR for every user.
///
/// Consistent mode, MRT:
///   Gamma = M q(j,j,k) / ( M * sum_{l != j sharing} q(l,j,k)
///           + sum_{l} K beta(l,j,k) - q(j,j,k) + sigma^2 / rho_d )
/// Consistent mode, ZF: numerator (M-K) q(j,j,k); coherent term scaled by
/// (M-K); leakage nulled on estimates at every BS holding one, i.e. the
/// own cell and each pilot-sharing cell l contribute K (beta - q(l,j,k))
/// instead of K beta.
///
/// Paper mode replaces the non-coherent sum by K * sum_{l != j} q(l,j,k),
/// counting cross-cell interference through the estimate variances.
///
/// Throws InsufficientAntennas for ZF with M <= K.
SinrReport sinr_closed_form(const LargeScaleMap& beta,
                            const EstimateVarianceMap& q,
                            const PilotAssignment& pa,
                            const SystemConfig& config, SinrMode mode,
                            Precoder precoder);

/// M -> infinity SINR ceiling, identical for MRT and ZF:
///   gamma_inf(j,k) = q(j,j,k) / sum_{l != j sharing} q(l,j,k),
/// +infinity when the user has no contaminating sharer.
std::vector<std::vector<double>> asymptotic_ceiling(
    const EstimateVarianceMap& q, const PilotAssignment& pa,
    const SystemConfig& config);

/// Monte Carlo SINR estimate over n_trials channel draws.
///
/// Per trial it measures the desired-signal mean h^T b, the beamforming
/// uncertainty due to imperfect CSI |(h - h_hat)^T b|^2, and every
/// interfering stream's power |h^T b'|^2, then assembles
///   Gamma = |mean(h^T b)|^2 / (uncertainty + interference + sigma^2/rho_d).
/// The 95% CI half-width comes from batch means (20 batches).  Trials use
/// counter-based substreams of (seed, drop), so the result is independent
/// of evaluation order and worker count.
SinrReport sinr_monte_carlo(const LargeScaleMap& beta,
                            const PilotAssignment& pa,
                            const SystemConfig& config, Precoder precoder,
                            int n_trials, uint64_t seed, uint32_t drop = 0);

/// rate = prelog * log2(1 + gamma) per user, aggregated per cell and in
/// total.  Throws ConfigError unless prelog lies in [0, 1].
RateReport rate_lower_bound(const SinrReport& sinr, double prelog,
                            const SystemConfig& config);

/// Full grouping pipeline: group_users -> grouped allocate_pilots ->
/// estimate_variance -> closed-form SINR -> overhead-aware rate with
/// prelog = 1 - T_p/T_c, T_p = sum_l K_le + max_l K_lc.
/// Throws PilotOverheadExceedsCoherence when T_p >= T_c.
RateReport rate_with_grouping(const LargeScaleMap& beta,
                              const SystemConfig& config, Precoder precoder);

/// Serialization: one CSV row per user, and a JSON summary with aggregates,
/// config echo and seed.
void write_rate_csv(const RateReport& report, const std::string& path);
std::string rate_json_summary(const RateReport& report);

}  // namespace pcsim
