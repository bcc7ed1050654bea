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

#include "pcsim/large_scale.hpp"

#include <cmath>

#include "pcsim/errors.hpp"
#include "pcsim/rng.hpp"

namespace pcsim {

LargeScaleMap compute_large_scale(const CellGeometry& geometry,
                                  const SystemConfig& config, uint64_t seed,
                                  uint32_t drop) {
  const int L = geometry.num_cells();
  const int K = config.users_per_cell;
  if (geometry.user_positions.empty()) {
    throw SimError("compute_large_scale: users not yet dropped");
  }

  LargeScaleMap map;
  map.beta = Tensor3<double>(L, L, K, 0.0);
  const double alpha = config.path_loss_exponent;
  const double R = geometry.cell_radius;

  for (int l = 0; l < L; ++l) {
    for (int j = 0; j < L; ++j) {
      for (int k = 0; k < K; ++k) {
        const double d =
            geometry.wrapped_distance(geometry.user_positions[j][k], l);
        double gain = std::pow(d / R, -alpha);
        if (config.shadowing_db > 0.0) {
          RngStream rng(seed, RngDomain::kShadowing, drop, 0,
                        (uint32_t(l) * uint32_t(L) + uint32_t(j)) *
                                uint32_t(K) +
                            uint32_t(k));
          const double shadow_db = config.shadowing_db * rng.next_normal();
          gain *= std::pow(10.0, shadow_db / 10.0);
        }
        map.beta(l, j, k) = gain;
      }
    }
  }
  return map;
}

}  // namespace pcsim
