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

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "pcsim/estimation.hpp"
#include "pcsim/rng.hpp"

using namespace pcsim;

namespace {

SystemConfig two_cell_config(double rho_tr) {
  SystemConfig cfg;
  cfg.num_cells = 2;
  cfg.users_per_cell = 1;
  cfg.num_antennas = 4;
  cfg.uplink_pilot_snr = rho_tr;
  cfg.pilot_reuse_factor = 1;
  return cfg;
}

// beta seen at BS 0: own user 1.0, interfering sharer 0.5 (mirrored at BS 1).
LargeScaleMap two_cell_map() {
  LargeScaleMap map;
  map.beta = Tensor3<double>(2, 2, 1, 0.0);
  map.beta(0, 0, 0) = 1.0;
  map.beta(0, 1, 0) = 0.5;
  map.beta(1, 1, 0) = 1.0;
  map.beta(1, 0, 0) = 0.5;
  return map;
}

}  // namespace

TEST_CASE("estimation: despread signal power matches the model") {
  // One sharer, beta = 1, rho_tr = 1, M = 8: E||xi||^2 = 8 * (1 + 1) = 16.
  SystemConfig cfg = two_cell_config(1.0);
  cfg.num_cells = 1;
  cfg.num_antennas = 8;
  LargeScaleMap map;
  map.beta = Tensor3<double>(1, 1, 1, 1.0);
  const PilotAssignment pa = allocate_pilots(cfg);

  const int n = 10000;
  double sum = 0.0;
  for (int t = 0; t < n; ++t) {
    const StreamKey key{5, 0, uint32_t(t)};
    const ChannelRealization h =
        assemble_channel(map, sample_small_scale(1, 1, 8, key));
    sum += synthesize_training(h, pa, cfg, key).xi[0][0].squaredNorm();
  }
  CHECK(sum / n == doctest::Approx(16.0).epsilon(0.03));
}

TEST_CASE("estimation: noiseless limit recovers the channel") {
  SystemConfig cfg = two_cell_config(1e12);
  cfg.num_cells = 1;
  LargeScaleMap map;
  map.beta = Tensor3<double>(1, 1, 1, 1.0);
  const PilotAssignment pa = allocate_pilots(cfg);
  const StreamKey key{6, 0, 0};
  const ChannelRealization h =
      assemble_channel(map, sample_small_scale(1, 1, 4, key));
  const TrainingObservation xi = synthesize_training(h, pa, cfg, key);
  const Eigen::VectorXcd recovered = xi.xi[0][0] / std::sqrt(1e12);
  CHECK((recovered - h.h(0, 0, 0)).norm() < 1e-4 * h.h(0, 0, 0).norm());
}

TEST_CASE("estimation: sharers superpose in the despread signal") {
  // Two sharers seen through equal channels: the mean correlation against
  // the common channel direction is 2 sqrt(rho_tr) * M * beta.
  SystemConfig cfg = two_cell_config(4.0);
  LargeScaleMap map;
  map.beta = Tensor3<double>(2, 2, 1, 1.0);
  const PilotAssignment pa = allocate_pilots(cfg);
  const int n = 4000, M = 4;
  std::complex<double> corr = 0.0;
  for (int t = 0; t < n; ++t) {
    const StreamKey key{7, 0, uint32_t(t)};
    SmallScaleRealization theta = sample_small_scale(2, 1, M, key);
    theta.theta(0, 1, 0) = theta.theta(0, 0, 0);  // identical channels at BS 0
    const ChannelRealization h = assemble_channel(map, theta);
    const TrainingObservation xi = synthesize_training(h, pa, cfg, key);
    corr += (h.h(0, 0, 0).adjoint() * xi.xi[0][0]).value() /
            h.h(0, 0, 0).squaredNorm();
  }
  corr /= double(n);
  CHECK(corr.real() == doctest::Approx(2.0 * std::sqrt(4.0)).epsilon(0.05));
  CHECK(std::abs(corr.imag()) < 0.05);
}

TEST_CASE("estimation: scalar MMSE coefficient") {
  SystemConfig cfg = two_cell_config(1.0);
  cfg.num_cells = 1;
  LargeScaleMap map;
  map.beta = Tensor3<double>(1, 1, 1, 1.0);
  const PilotAssignment pa = allocate_pilots(cfg);
  // One sharer, beta = 1, rho_tr = 1: c = 1/2.
  CHECK(mmse_coefficient(map, pa, cfg, 0, 0, 0) == doctest::Approx(0.5));

  // Perfect-estimation limit: c * sqrt(rho_tr) -> 1.
  SystemConfig hi = cfg;
  hi.uplink_pilot_snr = 1e12;
  CHECK(mmse_coefficient(map, pa, hi, 0, 0, 0) * std::sqrt(1e12) ==
        doctest::Approx(1.0).epsilon(1e-8));

  // Zero gain: zero coefficient.
  map.beta(0, 0, 0) = 0.0;
  CHECK(mmse_coefficient(map, pa, cfg, 0, 0, 0) == 0.0);
}

TEST_CASE("estimation: closed-form variances for the two-sharer example") {
  const SystemConfig cfg = two_cell_config(1.0);
  const LargeScaleMap map = two_cell_map();
  const PilotAssignment pa = allocate_pilots(cfg);
  const EstimateVarianceMap q = estimate_variance(map, pa, cfg);
  // rho_tr = 1, sharer gains {1.0, 0.5}: q_own = 1/2.5, q_cross = 0.25/2.5.
  CHECK(q(0, 0, 0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(q(0, 1, 0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(q(1, 1, 0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(q(1, 0, 0) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("estimation: variance limits") {
  SystemConfig cfg = two_cell_config(1e12);
  cfg.num_cells = 1;
  LargeScaleMap map;
  map.beta = Tensor3<double>(1, 1, 1, 0.7);
  const PilotAssignment pa = allocate_pilots(cfg);
  // Single sharer, rho_tr -> infinity: q -> beta.
  CHECK(estimate_variance(map, pa, cfg)(0, 0, 0) ==
        doctest::Approx(0.7).epsilon(1e-10));
  map.beta(0, 0, 0) = 0.0;
  CHECK(estimate_variance(map, pa, cfg)(0, 0, 0) == 0.0);
}

TEST_CASE("estimation: q never exceeds beta") {
  RngStream rng(31, RngDomain::kTest, 0, 0, 0);
  for (int rep = 0; rep < 200; ++rep) {
    SystemConfig cfg;
    cfg.num_cells = 1 + int(rng.next_u32() % 4);
    cfg.users_per_cell = 1 + int(rng.next_u32() % 4);
    cfg.pilot_reuse_factor = 1 + int(rng.next_u32() % 3);
    cfg.uplink_pilot_snr = std::exp(2.0 * rng.next_normal());
    LargeScaleMap map;
    map.beta = Tensor3<double>(cfg.num_cells, cfg.num_cells,
                               cfg.users_per_cell, 0.0);
    for (auto& b : map.beta) b = std::exp(2.0 * rng.next_normal());
    const PilotAssignment pa = allocate_pilots(cfg);
    const EstimateVarianceMap q = estimate_variance(map, pa, cfg);
    for (int j = 0; j < cfg.num_cells; ++j) {
      for (int l = 0; l < cfg.num_cells; ++l) {
        for (int i = 0; i < cfg.users_per_cell; ++i) {
          CHECK(q(j, l, i) >= 0.0);
          CHECK(q(j, l, i) <= map.beta(j, l, i));
        }
      }
    }
  }
}

TEST_CASE("estimation: variance transforms predictably under gain scaling") {
  const SystemConfig cfg = two_cell_config(2.0);
  const LargeScaleMap map = two_cell_map();
  const PilotAssignment pa = allocate_pilots(cfg);
  RngStream rng(37, RngDomain::kTest, 0, 0, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const double c = std::exp(2.0 * rng.next_normal());
    LargeScaleMap scaled = map;
    for (auto& b : scaled.beta) b *= c;
    const EstimateVarianceMap qs = estimate_variance(scaled, pa, cfg);
    // q(c beta) = rho c^2 beta^2 / (1 + rho c sum beta).
    const double rho = cfg.uplink_pilot_snr;
    const double expected =
        rho * c * c * 1.0 / (1.0 + rho * c * 1.5);
    CHECK(qs(0, 0, 0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("estimation: estimate statistics match the closed form") {
  const SystemConfig cfg = two_cell_config(1.0);
  const LargeScaleMap map = two_cell_map();
  const PilotAssignment pa = allocate_pilots(cfg);
  const int M = 4, n = 30000;

  double own_power = 0.0, cross_power = 0.0;
  std::complex<double> ortho = 0.0;
  double cos_min = 1.0;
  for (int t = 0; t < n; ++t) {
    const StreamKey key{8, 0, uint32_t(t)};
    const ChannelRealization h =
        assemble_channel(map, sample_small_scale(2, 1, M, key));
    const TrainingObservation xi = synthesize_training(h, pa, cfg, key);
    const ChannelEstimate est = mmse_estimate(xi, map, pa, cfg);

    own_power += est.h_hat(0, 0, 0).squaredNorm();
    cross_power += est.h_hat(0, 1, 0).squaredNorm();
    ortho += (est.h_hat(0, 0, 0).adjoint() * (h.h(0, 0, 0) - est.h_hat(0, 0, 0)))
                 .value();
    // Sharers' estimates are exactly collinear.
    const double cosine = std::abs((est.h_hat(0, 0, 0).adjoint() *
                                    est.h_hat(0, 1, 0))
                                       .value()) /
                          (est.h_hat(0, 0, 0).norm() * est.h_hat(0, 1, 0).norm());
    cos_min = std::min(cos_min, cosine);
  }
  // Per-antenna variances q = 0.4 and 0.1 (times M antennas).
  CHECK(own_power / n == doctest::Approx(M * 0.4).epsilon(0.02));
  CHECK(cross_power / n == doctest::Approx(M * 0.1).epsilon(0.02));
  CHECK(cos_min > 1.0 - 1e-12);
  // MMSE orthogonality: the mean residual shrinks as 1/sqrt(n).
  const double scale = std::sqrt(M * 0.4 * (1.0 - 0.4));
  CHECK(std::abs(ortho) / n < 3.0 * scale / std::sqrt(double(n)));
}

TEST_CASE("estimation: MMSE coefficient minimizes the sample MSE") {
  const SystemConfig cfg = two_cell_config(1.0);
  const LargeScaleMap map = two_cell_map();
  const PilotAssignment pa = allocate_pilots(cfg);
  const double c = mmse_coefficient(map, pa, cfg, 0, 0, 0);
  const int M = 4, n = 200000;

  double mse = 0.0, mse_up = 0.0, mse_down = 0.0;
  for (int t = 0; t < n; ++t) {
    const StreamKey key{9, 0, uint32_t(t)};
    const ChannelRealization h =
        assemble_channel(map, sample_small_scale(2, 1, M, key));
    const TrainingObservation xi = synthesize_training(h, pa, cfg, key);
    mse += (h.h(0, 0, 0) - c * xi.xi[0][0]).squaredNorm();
    mse_up += (h.h(0, 0, 0) - 1.01 * c * xi.xi[0][0]).squaredNorm();
    mse_down += (h.h(0, 0, 0) - 0.99 * c * xi.xi[0][0]).squaredNorm();
  }
  CHECK(mse < mse_up);
  CHECK(mse < mse_down);
}

TEST_CASE("estimation: q tensor dumps to CSV") {
  const SystemConfig cfg = two_cell_config(1.0);
  const LargeScaleMap map = two_cell_map();
  const PilotAssignment pa = allocate_pilots(cfg);
  const EstimateVarianceMap q = estimate_variance(map, pa, cfg);
  const std::string path = "q_dump_test.csv";
  dump_q_csv(map, q, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "l,j,k,beta,q");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 4);
  std::remove(path.c_str());
}
