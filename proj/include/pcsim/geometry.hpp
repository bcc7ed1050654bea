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

#include <array>
#include <cstdint>
#include <vector>

#include "pcsim/config.hpp"

namespace pcsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }

/// Hexagonal grid of base stations with torus wrap-around.
///
/// The L cells are coset representatives of the most compact index-L
/// sublattice of the hex lattice (BS spacing 2R cos 30 = sqrt(3) R), so
/// every cell sees the same interference neighborhood.  Wrapped distances
/// minimize over the 7 nearest grid translations: zero plus the six
/// relevant vectors of the reduced sublattice basis.
struct CellGeometry {
  double cell_radius = 0.0;
  double min_distance = 0.0;
  std::vector<Vec2> bs_positions;                   // L entries
  std::vector<std::array<int, 2>> bs_lattice;       // hex-lattice coords
  std::vector<std::vector<Vec2>> user_positions;    // L x K once dropped
  std::vector<Vec2> wrap_translations;              // 7 entries, first is 0
  std::array<std::array<long, 2>, 2> wrap_basis{};  // sublattice basis, int

  int num_cells() const { return int(bs_positions.size()); }

  /// Wrapped distance from an arbitrary point to base station l.
  double wrapped_distance(Vec2 p, int l) const;

  /// Wrapped BS-to-BS distance, evaluated on the lattice so that it is an
  /// exact function of the cell pair's coset difference.
  double bs_distance(int a, int b) const;
};

/// Places the base stations for config.num_cells; users not yet assigned.
CellGeometry build_layout(const SystemConfig& config);

/// Drops K users per cell, uniform over the annulus
/// min_distance <= r <= cell_radius around the serving BS.  Deterministic
/// in (seed, drop).
CellGeometry drop_users(CellGeometry geometry, const SystemConfig& config,
                        uint64_t seed, uint32_t drop = 0);

}  // namespace pcsim
