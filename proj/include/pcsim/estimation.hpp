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

#include <string>

#include <Eigen/Dense>

#include "pcsim/channel.hpp"
#include "pcsim/pilots.hpp"
#include "pcsim/rng.hpp"
#include "pcsim/tensor.hpp"

namespace pcsim {

/// Despread uplink training signals.  xi(j, k) is what BS j receives on the
/// pilot of its own user k:
///   xi = sqrt(rho_tr) * sum_{(l,i) sharing that pilot} h(j, l, i) + n,
/// with n ~ CN(0, I_M).
struct TrainingObservation {
  std::vector<std::vector<Eigen::VectorXcd>> xi;  // L x K of M-vectors
};

/// Per-antenna variance of the MMSE channel estimates:
///   q(j, l, i) = rho_tr * beta(j,l,i)^2
///               / (1 + rho_tr * sum_{(l',i') in S(l,i)} beta(j,l',i')).
/// Entries are zero for channels BS j never observes through its own
/// pilot despreading.
using EstimateVarianceMap = Tensor3<double>;

/// MMSE channel estimates formed at every BS from its despread pilots.
/// h_hat(j, l, i) estimates h(j, l, i); unobserved entries are empty
/// vectors.  All sharers' estimates at one BS are collinear (they are
/// scalar multiples of the same despread signal).
struct ChannelEstimate {
  Tensor3<Eigen::VectorXcd> h_hat;  // L x L x K of M-vectors
  EstimateVarianceMap q;            // L x L x K

  const Eigen::VectorXcd& own(int cell, int user) const {
    return h_hat(cell, cell, user);
  }
};

/// Synthesizes the despread training observation for one channel
/// realization; noise comes from the trial's counter-based stream.
TrainingObservation synthesize_training(const ChannelRealization& h,
                                        const PilotAssignment& pa,
                                        const SystemConfig& config,
                                        const StreamKey& key);

/// Scalar MMSE coefficient c such that h_hat(obs, cell, user) =
/// c * xi(obs, p):  c = sqrt(rho_tr) * beta(obs, cell, user) / (1 +
/// rho_tr * sum over the sharer set of beta at obs).
double mmse_coefficient(const LargeScaleMap& beta, const PilotAssignment& pa,
                        const SystemConfig& config, int obs_bs, int cell,
                        int user);

/// Closed-form estimate variance tensor (see EstimateVarianceMap).
EstimateVarianceMap estimate_variance(const LargeScaleMap& beta,
                                      const PilotAssignment& pa,
                                      const SystemConfig& config);

/// Forms every observable MMSE estimate from the despread training signals.
/// The estimation error h - h_hat is uncorrelated with h_hat.
ChannelEstimate mmse_estimate(const TrainingObservation& xi,
                              const LargeScaleMap& beta,
                              const PilotAssignment& pa,
                              const SystemConfig& config);

/// Debug dump of the variance map (columns: l, j, k, beta, q).
void dump_q_csv(const LargeScaleMap& beta, const EstimateVarianceMap& q,
                const std::string& path);

}  // namespace pcsim
