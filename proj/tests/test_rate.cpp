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
#include <cstdio>
#include <fstream>
#include <limits>

#include <doctest.h>
#include <json.hpp>

#include "pcsim/errors.hpp"
#include "pcsim/rate.hpp"

using namespace pcsim;

namespace {

// Two mirrored cells, K users, reuse-1 sharers (0,k) ~ (1,k).
struct HandScenario {
  SystemConfig cfg;
  LargeScaleMap beta;
  PilotAssignment pa;
  EstimateVarianceMap q;
};

HandScenario mirrored_two_cell(int K, double own_hi, double cross_hi) {
  HandScenario s;
  s.cfg.num_cells = 2;
  s.cfg.users_per_cell = K;
  s.cfg.pilot_reuse_factor = 1;
  s.cfg.uplink_pilot_snr = 10.0;
  s.cfg.downlink_snr = 10.0;
  s.cfg.coherence_block = 200;
  s.beta.beta = Tensor3<double>(2, 2, K, 0.0);
  for (int k = 0; k < K; ++k) {
    const double own = own_hi / (1.0 + k);
    const double cross = cross_hi / (1.0 + k);
    s.beta.beta(0, 0, k) = own;
    s.beta.beta(1, 1, k) = own;
    s.beta.beta(0, 1, k) = cross;
    s.beta.beta(1, 0, k) = cross;
  }
  s.pa = allocate_pilots(s.cfg);
  s.q = estimate_variance(s.beta, s.pa, s.cfg);
  return s;
}

}  // namespace

TEST_CASE("closed form: hand-evaluated MRT SINR") {
  // M = 100, q_own = 0.4, one contaminating cell with q_cross = 0.1,
  // sum of interfering stream powers 3.0, noise term 0.1:
  // Gamma = 40 / (10 + 3.0 - 0.4 + 0.1) = 40 / 12.7.
  SystemConfig cfg;
  cfg.num_cells = 2;
  cfg.users_per_cell = 2;
  cfg.num_antennas = 100;
  cfg.pilot_reuse_factor = 1;
  cfg.downlink_snr = 10.0;
  cfg.noise_power = 1.0;

  LargeScaleMap beta;
  beta.beta = Tensor3<double>(2, 2, 2, 0.25);
  // Streams seen by user (0,0): K * (beta(0,0,0) + beta(1,0,0)) = 3.0.
  beta.beta(0, 0, 0) = 1.0;
  beta.beta(1, 0, 0) = 0.5;

  EstimateVarianceMap q(2, 2, 2, 0.05);
  q(0, 0, 0) = 0.4;
  q(1, 0, 0) = 0.1;

  const PilotAssignment pa = allocate_pilots(cfg);
  const SinrReport rep =
      sinr_closed_form(beta, q, pa, cfg, SinrMode::kConsistent, Precoder::kMrt);
  CHECK(rep.gamma_cf[0][0] == doctest::Approx(40.0 / 12.7).epsilon(1e-12));
  CHECK(rep.gamma_cf[0][0] == doctest::Approx(3.149606299).epsilon(1e-9));
}

TEST_CASE("closed form: single-user matched-filter bound is exact") {
  SystemConfig cfg;
  cfg.num_cells = 1;
  cfg.users_per_cell = 1;
  cfg.num_antennas = 32;
  cfg.downlink_snr = 10.0;
  cfg.noise_power = 1.0;

  LargeScaleMap beta;
  beta.beta = Tensor3<double>(1, 1, 1, 1.0);
  EstimateVarianceMap q(1, 1, 1, 1.0);  // perfect CSI: q = beta
  const PilotAssignment pa = allocate_pilots(cfg);
  const SinrReport rep =
      sinr_closed_form(beta, q, pa, cfg, SinrMode::kConsistent, Precoder::kMrt);
  CHECK(rep.gamma_cf[0][0] == 32.0 * 10.0);  // M rho_d / sigma^2, exactly
}

TEST_CASE("closed form: ZF nulls the estimated own-cell interference") {
  const HandScenario s = mirrored_two_cell(3, 1.0, 0.2);
  SystemConfig cfg = s.cfg;
  cfg.num_antennas = 64;
  const SinrReport mrt = sinr_closed_form(s.beta, s.q, s.pa, cfg,
                                          SinrMode::kConsistent, Precoder::kMrt);
  const SinrReport zf = sinr_closed_form(s.beta, s.q, s.pa, cfg,
                                         SinrMode::kConsistent, Precoder::kZf);
  // Manual reassembly for user (0,0).
  const int M = 64, K = 3;
  const double noise = cfg.noise_power / cfg.downlink_snr;
  double streams = 0.0;
  for (int l = 0; l < 2; ++l) streams += K * s.beta.beta(l, 0, 0);
  const double mrt_expected =
      M * s.q(0, 0, 0) /
      (M * s.q(1, 0, 0) + streams - s.q(0, 0, 0) + noise);
  // ZF nulls the estimated component at both the serving and the sharing
  // cell, so each contributes K * (beta - q) of residual leakage.
  const double zf_expected =
      (M - K) * s.q(0, 0, 0) /
      ((M - K) * s.q(1, 0, 0) + streams - K * s.q(0, 0, 0) -
       K * s.q(1, 0, 0) + noise);
  CHECK(mrt.gamma_cf[0][0] == doctest::Approx(mrt_expected).epsilon(1e-12));
  CHECK(zf.gamma_cf[0][0] == doctest::Approx(zf_expected).epsilon(1e-12));

  SystemConfig tight = cfg;
  tight.num_antennas = K;
  CHECK_THROWS_AS(sinr_closed_form(s.beta, s.q, s.pa, tight,
                                   SinrMode::kConsistent, Precoder::kZf),
                  InsufficientAntennas);
}

TEST_CASE("closed form: paper mode counts interference through q") {
  const HandScenario s = mirrored_two_cell(2, 1.0, 0.3);
  SystemConfig cfg = s.cfg;
  cfg.num_antennas = 50;
  const SinrReport rep = sinr_closed_form(s.beta, s.q, s.pa, cfg,
                                          SinrMode::kPaper, Precoder::kMrt);
  const double noise = cfg.noise_power / cfg.downlink_snr;
  const double expected =
      50.0 * s.q(0, 0, 0) /
      (50.0 * s.q(1, 0, 0) + 2.0 * s.q(1, 0, 0) + noise);
  CHECK(rep.gamma_cf[0][0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("closed form: converges to the ceiling as M grows") {
  const HandScenario s = mirrored_two_cell(4, 1.0, 0.25);
  const auto ceiling = asymptotic_ceiling(s.q, s.pa, s.cfg);
  SystemConfig cfg = s.cfg;
  cfg.num_antennas = 1000000;
  for (Precoder p : {Precoder::kMrt, Precoder::kZf}) {
    const SinrReport rep =
        sinr_closed_form(s.beta, s.q, s.pa, cfg, SinrMode::kConsistent, p);
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 4; ++k) {
        CHECK(rep.gamma_cf[j][k] ==
              doctest::Approx(ceiling[j][k]).epsilon(1e-3));
      }
    }
  }
}

TEST_CASE("closed form: rate grows with M and saturates at the ceiling") {
  const HandScenario s = mirrored_two_cell(4, 1.0, 0.25);
  const auto ceiling = asymptotic_ceiling(s.q, s.pa, s.cfg);
  const double prelog = 1.0 - 4.0 / s.cfg.coherence_block;
  for (Precoder p : {Precoder::kMrt, Precoder::kZf}) {
    double prev = 0.0;
    for (int M : {16, 64, 256, 1024, 4096}) {
      SystemConfig cfg = s.cfg;
      cfg.num_antennas = M;
      const SinrReport rep =
          sinr_closed_form(s.beta, s.q, s.pa, cfg, SinrMode::kConsistent, p);
      CHECK(rep.gamma_cf[0][0] > prev);
      prev = rep.gamma_cf[0][0];
      const double rate = prelog * std::log2(1.0 + rep.gamma_cf[0][0]);
      const double limit = prelog * std::log2(1.0 + ceiling[0][0]);
      CHECK(rate <= limit);
      if (M == 4096) CHECK(rate >= 0.97 * limit);
    }
  }
}

TEST_CASE("ceiling: hand value and the contamination-free sentinel") {
  SystemConfig cfg;
  cfg.num_cells = 2;
  cfg.users_per_cell = 1;
  cfg.pilot_reuse_factor = 1;
  EstimateVarianceMap q(2, 2, 1, 0.0);
  q(0, 0, 0) = 0.4;
  q(1, 0, 0) = 0.1;
  q(1, 1, 0) = 0.4;
  q(0, 1, 0) = 0.1;
  const PilotAssignment shared = allocate_pilots(cfg);
  const auto ceiling = asymptotic_ceiling(q, shared, cfg);
  CHECK(ceiling[0][0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::log2(1.0 + ceiling[0][0]) == doctest::Approx(2.3219).epsilon(1e-4));

  cfg.pilot_reuse_factor = 2;  // fully orthogonal: infinite ceiling
  const PilotAssignment orth = allocate_pilots(cfg);
  const auto free_ceiling = asymptotic_ceiling(q, orth, cfg);
  CHECK(std::isinf(free_ceiling[0][0]));
}

TEST_CASE("ceiling: invariant under uniform gain scaling") {
  // Mirrored cells have equal sharer sums at both base stations, so the
  // despread denominators cancel from the ratio.
  const HandScenario s = mirrored_two_cell(2, 1.0, 0.2);
  const auto ref = asymptotic_ceiling(s.q, s.pa, s.cfg);
  LargeScaleMap scaled = s.beta;
  for (auto& b : scaled.beta) b *= 1000.0;
  const auto q2 = estimate_variance(scaled, s.pa, s.cfg);
  const auto up = asymptotic_ceiling(q2, s.pa, s.cfg);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(up[j][k] / ref[j][k] - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("rate: lower bound arithmetic") {
  SinrReport sinr;
  sinr.num_cells = 1;
  sinr.users_per_cell = 3;
  sinr.gamma_cf = {{3.0, 0.0, 4.0}};
  SystemConfig cfg;
  cfg.num_cells = 1;
  cfg.users_per_cell = 3;

  const RateReport unit = rate_lower_bound(sinr, 1.0, cfg);
  CHECK(unit.rate_cf[0][0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(unit.rate_cf[0][1] == 0.0);

  const RateReport scaled = rate_lower_bound(sinr, 0.96, cfg);
  CHECK(scaled.rate_cf[0][2] == doctest::Approx(2.229051).epsilon(1e-6));
  CHECK(scaled.total_cf ==
        doctest::Approx(0.96 * (std::log2(4.0) + 0.0 + std::log2(5.0))));

  CHECK_THROWS_AS(rate_lower_bound(sinr, 1.5, cfg), ConfigError);
  CHECK_THROWS_AS(rate_lower_bound(sinr, -0.1, cfg), ConfigError);
}

TEST_CASE("rate: grouping pipeline applies the overhead-aware prelog") {
  // Three cells, serving gains [10, 10, 1, 1]: two center and two edge
  // users per cell, center book 2, edge pilots 6: prelog = 1 - 8/200.
  SystemConfig cfg;
  cfg.num_cells = 3;
  cfg.users_per_cell = 4;
  cfg.num_antennas = 64;
  cfg.coherence_block = 200;
  cfg.grouping_enabled = true;
  cfg.grouping_threshold = 1.0;

  LargeScaleMap beta;
  beta.beta = Tensor3<double>(3, 3, 4, 0.01);
  for (int i = 0; i < 3; ++i) {
    beta.beta(i, i, 0) = 10.0;
    beta.beta(i, i, 1) = 10.0;
    beta.beta(i, i, 2) = 1.0;
    beta.beta(i, i, 3) = 1.0;
  }

  const RateReport rep = rate_with_grouping(beta, cfg, Precoder::kMrt);
  CHECK(rep.pilot_length == 8);
  CHECK(rep.prelog == doctest::Approx(0.96).epsilon(1e-12));
  CHECK(rep.grouping_applied);
  CHECK(rep.grouping.num_center(0) == 2);
  CHECK(rep.grouping.num_edge(0) == 2);
  // Edge users have singleton sharer sets: infinite ceiling.
  CHECK(std::isinf(rep.sinr.gamma_inf[0][2]));
  CHECK(std::isinf(rep.sinr.gamma_inf[0][3]));
  CHECK_FALSE(std::isinf(rep.sinr.gamma_inf[0][0]));

  SystemConfig off = cfg;
  off.grouping_enabled = false;
  CHECK_THROWS_AS(rate_with_grouping(beta, off, Precoder::kMrt), ConfigError);
}

TEST_CASE("rate: all-center grouping degenerates to plain reuse-1") {
  SystemConfig cfg;
  cfg.num_cells = 2;
  cfg.users_per_cell = 3;
  cfg.num_antennas = 32;
  cfg.coherence_block = 100;
  cfg.grouping_enabled = true;

  LargeScaleMap beta;
  beta.beta = Tensor3<double>(2, 2, 3, 0.05);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 3; ++k) beta.beta(i, i, k) = 2.0;  // equal gains
  }

  const RateReport grouped = rate_with_grouping(beta, cfg, Precoder::kMrt);
  CHECK(grouped.pilot_length == 3);  // T_p = K

  SystemConfig plain_cfg = cfg;
  plain_cfg.grouping_enabled = false;
  plain_cfg.pilot_reuse_factor = 1;
  const PilotAssignment pa = allocate_pilots(plain_cfg);
  const EstimateVarianceMap q = estimate_variance(beta, pa, plain_cfg);
  const SinrReport sinr = sinr_closed_form(beta, q, pa, plain_cfg,
                                           SinrMode::kConsistent, Precoder::kMrt);
  const RateReport plain = rate_lower_bound(
      sinr, 1.0 - 3.0 / 100.0, plain_cfg);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 3; ++k) {
      CHECK(grouped.rate_cf[j][k] ==
            doctest::Approx(plain.rate_cf[j][k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("rate: report serialization") {
  const HandScenario s = mirrored_two_cell(2, 1.0, 0.2);
  SystemConfig cfg = s.cfg;
  cfg.num_antennas = 64;
  SinrReport sinr = sinr_closed_form(s.beta, s.q, s.pa, cfg,
                                     SinrMode::kConsistent, Precoder::kMrt);
  sinr.gamma_inf = asymptotic_ceiling(s.q, s.pa, cfg);
  RateReport rep = rate_lower_bound(sinr, 0.99, cfg);
  rep.seed = 77;
  rep.pilot_length = s.pa.pilot_length;

  const std::string path = "rate_report_test.csv";
  write_rate_csv(rep, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "cell,user,is_center,gamma_cf,gamma_mc,gamma_inf,ci95,rate_cf,rate_mc,"
        "prelog");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 4);
  std::remove(path.c_str());

  const auto parsed = nlohmann::json::parse(rate_json_summary(rep));
  CHECK(parsed["seed"] == 77);
  CHECK(parsed["prelog"] == doctest::Approx(0.99));
  CHECK(parsed["config"]["num_antennas"] == 64);
  CHECK(parsed["total_rate_cf"].get<double>() ==
        doctest::Approx(rep.total_cf));
}
