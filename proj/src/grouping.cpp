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

#include "pcsim/grouping.hpp"

#include <algorithm>

namespace pcsim {

int GroupingResult::total_center() const {
  int n = 0;
  for (const auto& c : center) n += int(c.size());
  return n;
}

int GroupingResult::total_edge() const {
  int n = 0;
  for (const auto& e : edge) n += int(e.size());
  return n;
}

int GroupingResult::max_center() const {
  int n = 0;
  for (const auto& c : center) n = std::max(n, int(c.size()));
  return n;
}

GroupingResult group_users(const LargeScaleMap& beta,
                           const SystemConfig& config) {
  const int L = beta.num_cells();
  const int K = beta.users_per_cell();
  const double tau = config.grouping_threshold;

  GroupingResult g;
  g.mu.resize(size_t(L));
  g.center.resize(size_t(L));
  g.edge.resize(size_t(L));
  g.is_center.assign(size_t(L), std::vector<bool>(size_t(K), false));

  for (int i = 0; i < L; ++i) {
    double lo = beta.beta(i, i, 0);
    double hi = lo;
    for (int k = 1; k < K; ++k) {
      lo = std::min(lo, beta.beta(i, i, k));
      hi = std::max(hi, beta.beta(i, i, k));
    }
    g.mu[i] = 0.5 * (hi + lo);
    const double threshold = tau * g.mu[i];
    for (int k = 0; k < K; ++k) {
      if (beta.beta(i, i, k) >= threshold) {  // ties go to center
        g.center[i].push_back(k);
        g.is_center[i][k] = true;
      } else {
        g.edge[i].push_back(k);
      }
    }
  }
  return g;
}

}  // namespace pcsim
