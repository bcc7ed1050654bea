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

#include "pcsim/channel.hpp"

#include <cmath>

#include "pcsim/errors.hpp"

namespace pcsim {

SmallScaleRealization sample_small_scale(int num_cells, int users_per_cell,
                                         int num_antennas,
                                         const StreamKey& key) {
  const int L = num_cells;
  const int K = users_per_cell;
  SmallScaleRealization out;
  out.theta = Tensor3<Eigen::VectorXcd>(L, L, K);
  for (int l = 0; l < L; ++l) {
    for (int j = 0; j < L; ++j) {
      for (int k = 0; k < K; ++k) {
        const uint32_t flat =
            (uint32_t(l) * uint32_t(L) + uint32_t(j)) * uint32_t(K) +
            uint32_t(k);
        RngStream rng = key.stream(RngDomain::kSmallScale, flat);
        Eigen::VectorXcd v(num_antennas);
        for (int m = 0; m < num_antennas; ++m) {
          v(m) = rng.next_cgauss();
        }
        out.theta(l, j, k) = std::move(v);
      }
    }
  }
  return out;
}

ChannelRealization assemble_channel(const LargeScaleMap& beta,
                                    const SmallScaleRealization& theta) {
  if (beta.beta.dim0() != theta.theta.dim0() ||
      beta.beta.dim1() != theta.theta.dim1() ||
      beta.beta.dim2() != theta.theta.dim2()) {
    throw SimError("assemble_channel: shape mismatch between beta and theta");
  }
  const int L = beta.beta.dim0();
  const int K = beta.beta.dim2();
  ChannelRealization out;
  out.h = Tensor3<Eigen::VectorXcd>(L, L, K);
  for (int l = 0; l < L; ++l) {
    for (int j = 0; j < L; ++j) {
      for (int k = 0; k < K; ++k) {
        out.h(l, j, k) = std::sqrt(beta.beta(l, j, k)) * theta.theta(l, j, k);
      }
    }
  }
  return out;
}

}  // namespace pcsim
