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

#include "pcsim/config.hpp"
#include "pcsim/geometry.hpp"
#include "pcsim/tensor.hpp"

namespace pcsim {

/// Large-scale gain tensor: beta(l, j, k) is the linear path gain between
/// BS l and user k served by cell j.  Entries are strictly positive.
struct LargeScaleMap {
  Tensor3<double> beta;  // L x L x K

  int num_cells() const { return beta.dim0(); }
  int users_per_cell() const { return beta.dim2(); }
};

/// beta = (d/R)^(-alpha) * 10^(S/10) with wrapped distance d and log-normal
/// shadowing S ~ N(0, shadowing_db^2) in dB.  Deterministic in (seed, drop).
LargeScaleMap compute_large_scale(const CellGeometry& geometry,
                                  const SystemConfig& config, uint64_t seed,
                                  uint32_t drop = 0);

}  // namespace pcsim
