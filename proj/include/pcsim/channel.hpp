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

#include <Eigen/Dense>

#include "pcsim/large_scale.hpp"
#include "pcsim/rng.hpp"
#include "pcsim/tensor.hpp"

namespace pcsim {

/// One i.i.d. Rayleigh draw: theta(l, j, k) is an M-vector of unit-variance
/// circularly-symmetric complex Gaussians.
struct SmallScaleRealization {
  Tensor3<Eigen::VectorXcd> theta;  // L x L x K of M-vectors
};

/// Full channel realization h(l, j, k) = sqrt(beta(l, j, k)) * theta(l, j, k).
/// The same realization serves uplink training and downlink data within a
/// coherence block (TDD reciprocity).
struct ChannelRealization {
  Tensor3<Eigen::VectorXcd> h;  // L x L x K of M-vectors
};

/// Fresh i.i.d. small-scale draw; each (l, j, k) entry comes from its own
/// counter-based substream of `key`, so results do not depend on iteration
/// order or worker count.
SmallScaleRealization sample_small_scale(int num_cells, int users_per_cell,
                                         int num_antennas,
                                         const StreamKey& key);

/// Elementwise h = sqrt(beta) * theta.  Throws SimError on shape mismatch.
ChannelRealization assemble_channel(const LargeScaleMap& beta,
                                    const SmallScaleRealization& theta);

}  // namespace pcsim
