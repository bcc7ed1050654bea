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

#include <optional>
#include <utility>
#include <vector>

#include "pcsim/config.hpp"
#include "pcsim/grouping.hpp"

namespace pcsim {

/// A (cell, user) pair.
struct UserRef {
  int cell = 0;
  int user = 0;
  bool operator==(const UserRef&) const = default;
};

/// Orthogonal pilot book assignment.  Distinct pilot indices never
/// interfere; users with the same index are full sharers.  Within a cell
/// all pilots are distinct, so each BS despreads exactly K pilots.
struct PilotAssignment {
  int pilot_length = 0;                       // T_p = number of pilots
  std::vector<std::vector<int>> pilot_of;     // (cell, user) -> pilot index
  std::vector<std::vector<UserRef>> sharers;  // pilot index -> sharer set
  std::vector<std::vector<int>> user_of_pilot;  // (cell, pilot) -> own user
                                                // index or -1

  int pilot(int cell, int user) const { return pilot_of[cell][user]; }

  /// Sharer set of user (cell, user), including the user itself.
  const std::vector<UserRef>& sharer_set(int cell, int user) const {
    return sharers[pilot_of[cell][user]];
  }

  /// Own user of `cell` assigned to pilot p, or -1 if the cell does not
  /// use that pilot.
  int own_user(int cell, int p) const { return user_of_pilot[cell][p]; }

  /// Cells (other than `cell`) containing a sharer of (cell, user).
  std::vector<int> contaminating_cells(int cell, int user) const;
};

/// Builds the pilot assignment.
///
/// Plain mode: reuse-f coloring of cells (color = cell index mod f); user
/// (j, k) gets pilot color(j)*K + k, so T_p = f*K.  f = 1 shares one book
/// across all cells; f >= L is fully orthogonal.
///
/// Grouped mode (`grouping` supplied and config.grouping_enabled): center
/// users of each cell are packed into slots 0..K_lc-1 of a center book of
/// size max_l K_lc, shared across cells by slot; edge users are appended
/// with globally unique pilots.  T_p = max_l K_lc + sum_l K_le.
///
/// Throws PilotOverheadExceedsCoherence when T_p >= T_c.
PilotAssignment allocate_pilots(
    const SystemConfig& config,
    const std::optional<GroupingResult>& grouping = std::nullopt);

}  // namespace pcsim
