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

#include "pcsim/pilots.hpp"

#include <string>

#include "pcsim/errors.hpp"

namespace pcsim {

std::vector<int> PilotAssignment::contaminating_cells(int cell,
                                                      int user) const {
  std::vector<int> cells;
  for (const UserRef& u : sharer_set(cell, user)) {
    if (u.cell != cell) cells.push_back(u.cell);
  }
  return cells;
}

PilotAssignment allocate_pilots(const SystemConfig& config,
                                const std::optional<GroupingResult>& grouping) {
  const int L = config.num_cells;
  const int K = config.users_per_cell;

  PilotAssignment pa;
  pa.pilot_of.assign(size_t(L), std::vector<int>(size_t(K), -1));

  if (grouping.has_value()) {
    if (!config.grouping_enabled) {
      throw ConfigError(
          "allocate_pilots: grouping supplied but grouping_enabled is off");
    }
    const GroupingResult& g = *grouping;
    const int center_book = g.max_center();
    pa.pilot_length = center_book + g.total_edge();
    pa.sharers.assign(size_t(pa.pilot_length), {});
    // Center users share by slot across cells; edge users are globally
    // orthogonal.
    int next_edge = center_book;
    for (int l = 0; l < L; ++l) {
      for (size_t s = 0; s < g.center[l].size(); ++s) {
        const int k = g.center[l][s];
        pa.pilot_of[l][k] = int(s);
        pa.sharers[s].push_back({l, k});
      }
      for (int k : g.edge[l]) {
        pa.pilot_of[l][k] = next_edge;
        pa.sharers[size_t(next_edge)].push_back({l, k});
        ++next_edge;
      }
    }
  } else {
    // Plain reuse-f coloring: color(j) = j mod f; the book holds f*K pilots
    // even when f > L (unused pilots stay empty).
    const int f = config.pilot_reuse_factor;
    pa.pilot_length = f * K;
    pa.sharers.assign(size_t(pa.pilot_length), {});
    for (int j = 0; j < L; ++j) {
      const int color = j % f;
      for (int k = 0; k < K; ++k) {
        const int p = color * K + k;
        pa.pilot_of[j][k] = p;
        pa.sharers[size_t(p)].push_back({j, k});
      }
    }
  }

  if (pa.pilot_length >= config.coherence_block) {
    throw PilotOverheadExceedsCoherence(
        "PilotOverheadExceedsCoherence: pilot length " +
        std::to_string(pa.pilot_length) + " >= coherence block " +
        std::to_string(config.coherence_block));
  }

  pa.user_of_pilot.assign(size_t(L), std::vector<int>(size_t(pa.pilot_length), -1));
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < K; ++k) {
      pa.user_of_pilot[j][size_t(pa.pilot_of[j][k])] = k;
    }
  }
  return pa;
}

}  // namespace pcsim
