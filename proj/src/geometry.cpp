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

#include "pcsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcsim/errors.hpp"
#include "pcsim/rng.hpp"

namespace pcsim {

namespace {

// Hex lattice basis, nearest-neighbor spacing sqrt(3) R = 2 R cos(30).
Vec2 lattice_point(double spacing, long i, long j) {
  return {spacing * (double(i) + 0.5 * double(j)),
          spacing * (std::sqrt(3.0) / 2.0) * double(j)};
}

double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }

struct Basis {
  std::array<std::array<long, 2>, 2> cols;  // integer sublattice basis
};

// Lagrange-Gauss reduction of a 2D integer lattice basis, measured in the
// real embedding.
Basis reduce_basis(double spacing, Basis b) {
  auto embed = [&](const std::array<long, 2>& c) {
    return lattice_point(spacing, c[0], c[1]);
  };
  for (int iter = 0; iter < 64; ++iter) {
    if (norm2(embed(b.cols[0])) > norm2(embed(b.cols[1]))) {
      std::swap(b.cols[0], b.cols[1]);
    }
    const Vec2 w0 = embed(b.cols[0]);
    const Vec2 w1 = embed(b.cols[1]);
    const double mu = (w0.x * w1.x + w0.y * w1.y) / norm2(w0);
    const long m = std::lround(mu);
    if (m == 0) break;
    b.cols[1][0] -= m * b.cols[0][0];
    b.cols[1][1] -= m * b.cols[0][1];
  }
  if (norm2(lattice_point(spacing, b.cols[0][0], b.cols[0][1])) >
      norm2(lattice_point(spacing, b.cols[1][0], b.cols[1][1]))) {
    std::swap(b.cols[0], b.cols[1]);
  }
  return b;
}

// Most compact sublattice of index L, found by scoring every Hermite
// normal form basis [[a, b], [0, d]] with a*d = L, 0 <= b < a.
Basis best_sublattice(double spacing, int L) {
  Basis best{};
  double best_score = std::numeric_limits<double>::infinity();
  for (long a = 1; a <= L; ++a) {
    if (L % a != 0) continue;
    const long d = L / a;
    for (long b = 0; b < a; ++b) {
      Basis cand;
      cand.cols[0] = {a, 0};
      cand.cols[1] = {b, d};
      cand = reduce_basis(spacing, cand);
      const double s =
          norm2(lattice_point(spacing, cand.cols[0][0], cand.cols[0][1])) +
          norm2(lattice_point(spacing, cand.cols[1][0], cand.cols[1][1]));
      if (s < best_score) {
        best_score = s;
        best = cand;
      }
    }
  }
  return best;
}

// Coset id of lattice point n within the HNF sublattice [[a, b], [0, d]].
long coset_id(long a, long b, long d, long n0, long n1) {
  auto floormod = [](long x, long m) { return ((x % m) + m) % m; };
  const long t1 = floormod(n1, d);
  const long k1 = (n1 - t1) / d;
  const long t0 = floormod(n0 - k1 * b, a);
  return t0 * d + t1;
}

// HNF of the (column) basis, for coset arithmetic.
std::array<long, 3> hnf_of(const Basis& basis) {
  // Columns (c00, c01) and (c10, c11) with determinant +-L.  Bring to the
  // upper-triangular form [[a, b], [0, d]] (col0 = (a, 0), col1 = (b, d))
  // by unimodular column operations: Euclid on the second components.
  long c00 = basis.cols[0][0], c01 = basis.cols[0][1];
  long c10 = basis.cols[1][0], c11 = basis.cols[1][1];
  while (c01 != 0) {
    if (c11 == 0) {
      std::swap(c00, c10);
      std::swap(c01, c11);
      break;
    }
    const long qq = c01 / c11;
    c00 -= qq * c10;
    c01 -= qq * c11;  // |c01| < |c11| now
    if (c01 == 0) break;
    std::swap(c00, c10);
    std::swap(c01, c11);
  }
  long a = c00, b = c10, d = c11;
  if (d < 0) {
    b = -b;
    d = -d;
  }
  if (a < 0) a = -a;
  const long bb = ((b % a) + a) % a;
  return {a, bb, d};
}

}  // namespace

double CellGeometry::wrapped_distance(Vec2 p, int l) const {
  Vec2 base = p - bs_positions[l];
  if (wrap_translations.size() > 1) {
    // Reduce the difference into the fundamental domain first, so the
    // result does not depend on which coset representative hosts the BS;
    // the 7 nearest translations then resolve the closest image.
    const Vec2& w1 = wrap_translations[1];
    const Vec2& w2 = wrap_translations[3];
    const double det = w1.x * w2.y - w1.y * w2.x;
    const double a1 = (w2.y * base.x - w2.x * base.y) / det;
    const double a2 = (w1.x * base.y - w1.y * base.x) / det;
    const double r1 = std::round(a1);
    const double r2 = std::round(a2);
    base.x -= r1 * w1.x + r2 * w2.x;
    base.y -= r1 * w1.y + r2 * w2.y;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& t : wrap_translations) {
    best = std::min(best, std::sqrt(norm2(base - t)));
  }
  return best;
}

double CellGeometry::bs_distance(int a, int b) const {
  const long n0 = long(bs_lattice[a][0]) - bs_lattice[b][0];
  const long n1 = long(bs_lattice[a][1]) - bs_lattice[b][1];
  const double spacing = std::sqrt(3.0) * cell_radius;
  // Exact quotient metric: minimize over a window of sublattice shifts so
  // the value depends only on the coset difference.
  double best = std::numeric_limits<double>::infinity();
  for (long i = -3; i <= 3; ++i) {
    for (long j = -3; j <= 3; ++j) {
      const long m0 = n0 + i * wrap_basis[0][0] + j * wrap_basis[1][0];
      const long m1 = n1 + i * wrap_basis[0][1] + j * wrap_basis[1][1];
      best = std::min(best, std::sqrt(norm2(lattice_point(spacing, m0, m1))));
    }
  }
  return best;
}

CellGeometry build_layout(const SystemConfig& config) {
  config.validate();
  const int L = config.num_cells;
  const double spacing = std::sqrt(3.0) * config.cell_radius;

  CellGeometry geo;
  geo.cell_radius = config.cell_radius;
  geo.min_distance = config.min_distance;

  const Basis basis = best_sublattice(spacing, L);
  geo.wrap_basis = basis.cols;

  // The 7 wrap translations: zero plus the six relevant vectors of the
  // reduced basis (+-w1, +-w2 and the shorter of +-(w1 +- w2)).  A single
  // cell is isolated, not tiled against its own images.
  if (L == 1) {
    geo.wrap_translations = {{0.0, 0.0}};
  } else {
    const Vec2 w1 = lattice_point(spacing, basis.cols[0][0], basis.cols[0][1]);
    const Vec2 w2 = lattice_point(spacing, basis.cols[1][0], basis.cols[1][1]);
    const Vec2 wsum = w1 + w2;
    const Vec2 wdiff = w1 - w2;
    const Vec2 w3 = norm2(wsum) <= norm2(wdiff) ? wsum : wdiff;
    geo.wrap_translations = {{0.0, 0.0}, w1,           {-w1.x, -w1.y}, w2,
                             {-w2.x, -w2.y}, w3,       {-w3.x, -w3.y}};
  }

  // Coset representatives: walk lattice points outward from the origin and
  // keep the first point of each coset.  This yields the compact cluster.
  const auto [ha, hb, hd] = hnf_of(basis);
  std::vector<std::array<long, 2>> points;
  const long range = 2 * L + 2;
  for (long i = -range; i <= range; ++i) {
    for (long j = -range; j <= range; ++j) {
      points.push_back({i, j});
    }
  }
  std::sort(points.begin(), points.end(),
            [&](const std::array<long, 2>& p, const std::array<long, 2>& q) {
              const double np = norm2(lattice_point(spacing, p[0], p[1]));
              const double nq = norm2(lattice_point(spacing, q[0], q[1]));
              if (np != nq) return np < nq;
              if (p[0] != q[0]) return p[0] < q[0];
              return p[1] < q[1];
            });
  std::vector<bool> taken(size_t(L), false);
  for (const auto& p : points) {
    const long c = coset_id(ha, hb, hd, p[0], p[1]);
    if (!taken[size_t(c)]) {
      taken[size_t(c)] = true;
      geo.bs_lattice.push_back({int(p[0]), int(p[1])});
      geo.bs_positions.push_back(lattice_point(spacing, p[0], p[1]));
      if (int(geo.bs_positions.size()) == L) break;
    }
  }
  if (int(geo.bs_positions.size()) != L) {
    throw SimError("layout construction failed to cover all cosets");
  }
  return geo;
}

CellGeometry drop_users(CellGeometry geometry, const SystemConfig& config,
                        uint64_t seed, uint32_t drop) {
  const int L = geometry.num_cells();
  const int K = config.users_per_cell;
  const double r0 = geometry.min_distance;
  const double R = geometry.cell_radius;
  const double r0sq = r0 * r0;
  const double rspan = R * R - r0sq;

  geometry.user_positions.assign(size_t(L), std::vector<Vec2>(size_t(K)));
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < K; ++k) {
      RngStream rng(seed, RngDomain::kPlacement, drop, 0,
                    uint32_t(j) * uint32_t(K) + uint32_t(k));
      const double r = std::sqrt(r0sq + rng.next_unit() * rspan);
      const double ang = 2.0 * M_PI * rng.next_unit();
      geometry.user_positions[j][k] = {
          geometry.bs_positions[j].x + r * std::cos(ang),
          geometry.bs_positions[j].y + r * std::sin(ang)};
    }
  }
  return geometry;
}

}  // namespace pcsim
