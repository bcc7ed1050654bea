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

#include <vector>

#include <Eigen/Dense>

#include "pcsim/estimation.hpp"

namespace pcsim {

enum class Precoder { kMrt, kZf };

const char* to_string(Precoder p);

/// Downlink precoders, one M x K matrix per cell (column k serves user k).
/// The receive convention is r = h^T y, so MRT columns are conjugates of
/// the own-cell estimates.
///
/// Per-realization normalization: every column has unit norm exactly.
/// Statistical normalization: E||column||^2 = 1 via the deterministic
/// scales sqrt(M q) (MRT divisor) and sqrt((M-K) q) (ZF multiplier).
struct PrecoderSet {
  std::vector<Eigen::MatrixXcd> b;  // per cell, M x K
  Precoder mode = Precoder::kMrt;
  NormalizationMode normalization = NormalizationMode::kStatistical;
};

/// Matched-filter precoder: column k proportional to conj(h_hat(l, l, k)).
/// Throws DegenerateEstimate if a statistical-mode scale is zero.
PrecoderSet mrt_precoder(const ChannelEstimate& est,
                         const SystemConfig& config);

/// Zero-forcing precoder B = conj(Hhat) (Hhat^T conj(Hhat))^(-1), column
/// scaled per mode; intra-cell nulling holds on estimated channels to
/// machine precision.  Throws InsufficientAntennas (M <= K) or SingularGram
/// (Gram condition number > 1e12; no silent regularization).
PrecoderSet zf_precoder(const ChannelEstimate& est, const SystemConfig& config);

/// Transmit vector per cell: y_l = sqrt(rho_d) * B_l * x_l for unit-power
/// symbol vectors x_l.
std::vector<Eigen::VectorXcd> transmit_signal(
    const PrecoderSet& precoder, const std::vector<Eigen::VectorXcd>& symbols,
    const SystemConfig& config);

}  // namespace pcsim
