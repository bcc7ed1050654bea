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

#include "pcsim/config.hpp"
#include "pcsim/large_scale.hpp"

namespace pcsim {

/// Center/edge partition of each cell's users by serving gain.
///
/// Per cell i, the threshold midpoint is
///   mu_i = (max_k B_ik + min_k B_ik) / 2      with B_ik = beta(i, i, k),
/// and user k is a center user iff B_ik >= tau * mu_i (ties to center).
struct GroupingResult {
  std::vector<double> mu;                    // per-cell midpoint, linear
  std::vector<std::vector<int>> center;      // per-cell center user indices
  std::vector<std::vector<int>> edge;        // per-cell edge user indices
  std::vector<std::vector<bool>> is_center;  // L x K membership flags

  int num_center(int cell) const { return int(center[cell].size()); }
  int num_edge(int cell) const { return int(edge[cell].size()); }
  int total_center() const;
  int total_edge() const;
  int max_center() const;  // max_l K_lc
};

GroupingResult group_users(const LargeScaleMap& beta,
                           const SystemConfig& config);

}  // namespace pcsim
