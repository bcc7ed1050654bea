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

#include "pcsim/rate.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "pcsim/channel.hpp"
#include "pcsim/errors.hpp"
#include "pcsim/tensor.hpp"

namespace pcsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Student-t 97.5% quantile for 19 degrees of freedom (20 batches).
constexpr int kBatches = 20;
constexpr double kT975Df19 = 2.0930240544;

std::vector<std::vector<double>> make_grid(int L, int K, double fill) {
  return std::vector<std::vector<double>>(size_t(L),
                                          std::vector<double>(size_t(K), fill));
}

// Coherent pilot-contamination sum: estimate variances of (j,k)'s channel
// at every other cell sharing its pilot.
double coherent_sum(const EstimateVarianceMap& q, const PilotAssignment& pa,
                    int j, int k) {
  double acc = 0.0;
  for (int l : pa.contaminating_cells(j, k)) {
    acc += q(l, j, k);
  }
  return acc;
}

}  // namespace

SinrReport sinr_closed_form(const LargeScaleMap& beta,
                            const EstimateVarianceMap& q,
                            const PilotAssignment& pa,
                            const SystemConfig& config, SinrMode mode,
                            Precoder precoder) {
  const int L = beta.num_cells();
  const int K = beta.users_per_cell();
  const int M = config.num_antennas;
  if (precoder == Precoder::kZf && M <= K) {
    throw InsufficientAntennas(
        "InsufficientAntennas: zero forcing needs M > K (M=" +
        std::to_string(M) + ", K=" + std::to_string(K) + ")");
  }
  const double array_gain = precoder == Precoder::kZf ? double(M - K) : double(M);
  const double noise = config.noise_power / config.downlink_snr;

  SinrReport rep;
  rep.num_cells = L;
  rep.users_per_cell = K;
  rep.gamma_cf = make_grid(L, K, kNaN);

  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < K; ++k) {
      const double q_own = q(j, j, k);
      const double coherent = array_gain * coherent_sum(q, pa, j, k);
      double noncoherent = 0.0;
      if (mode == SinrMode::kConsistent) {
        // Every interfering stream contributes the full channel power; the
        // own cell's streams are reduced by what the estimate removes.
        for (int l = 0; l < L; ++l) {
          noncoherent += double(K) * beta.beta(l, j, k);
        }
        if (precoder == Precoder::kZf) {
          // Zero forcing nulls the estimated component of this user's
          // channel at every BS that holds an estimate of it: the own cell
          // and every pilot-sharing cell leak only (beta - q) per stream.
          noncoherent -= double(K) * q_own;
          for (int l : pa.contaminating_cells(j, k)) {
            noncoherent -= double(K) * q(l, j, k);
          }
        } else {
          noncoherent -= q_own;  // matched filter removes the mean gain only
        }
      } else {
        // As printed: non-coherent interference counted through estimate
        // variances of the cross channels.
        for (int l = 0; l < L; ++l) {
          if (l == j) continue;
          noncoherent += double(K) * q(l, j, k);
        }
      }
      rep.gamma_cf[j][k] =
          array_gain * q_own / (coherent + noncoherent + noise);
    }
  }
  return rep;
}

std::vector<std::vector<double>> asymptotic_ceiling(
    const EstimateVarianceMap& q, const PilotAssignment& pa,
    const SystemConfig& config) {
  (void)config;
  const int L = q.dim0();
  const int K = q.dim2();
  auto ceiling = make_grid(L, K, kNaN);
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < K; ++k) {
      const double denom = coherent_sum(q, pa, j, k);
      ceiling[j][k] = denom > 0.0 ? q(j, j, k) / denom : kInf;
    }
  }
  return ceiling;
}

SinrReport sinr_monte_carlo(const LargeScaleMap& beta,
                            const PilotAssignment& pa,
                            const SystemConfig& config, Precoder precoder,
                            int n_trials, uint64_t seed, uint32_t drop) {
  const int L = beta.num_cells();
  const int K = beta.users_per_cell();
  if (n_trials < 100) {
    throw ConfigError("sinr_monte_carlo requires n_trials >= 100");
  }

  struct UserAcc {
    KahanSum g_re, g_im;  // running sum of h^T b (desired link)
    KahanSum leak;        // |(h - h_hat)^T b|^2
    KahanSum interf;      // sum of all other streams' |h^T b'|^2
  };
  // Per-user, per-batch accumulators; trials are processed in index order,
  // so the reduction schedule is fixed regardless of the caller's threading.
  std::vector<std::vector<UserAcc>> acc(
      size_t(kBatches), std::vector<UserAcc>(size_t(L) * size_t(K)));
  std::vector<int> batch_count(size_t(kBatches), 0);

  for (int t = 0; t < n_trials; ++t) {
    const int batch = int(int64_t(t) * kBatches / n_trials);
    ++batch_count[size_t(batch)];
    const StreamKey key{seed, drop, uint32_t(t)};

    const SmallScaleRealization theta =
        sample_small_scale(L, K, config.num_antennas, key);
    const ChannelRealization h = assemble_channel(beta, theta);
    const TrainingObservation xi = synthesize_training(h, pa, config, key);
    const ChannelEstimate est = mmse_estimate(xi, beta, pa, config);
    const PrecoderSet set = precoder == Precoder::kZf
                                ? zf_precoder(est, config)
                                : mrt_precoder(est, config);

    for (int j = 0; j < L; ++j) {
      for (int k = 0; k < K; ++k) {
        UserAcc& a = acc[size_t(batch)][size_t(j) * size_t(K) + size_t(k)];
        double interf = 0.0;
        for (int l = 0; l < L; ++l) {
          const Eigen::VectorXcd gains =
              set.b[size_t(l)].transpose() * h.h(l, j, k);
          interf += gains.squaredNorm();
          if (l == j) {
            const std::complex<double> g_own = gains(k);
            interf -= std::norm(g_own);
            a.g_re.add(g_own.real());
            a.g_im.add(g_own.imag());
            const Eigen::VectorXcd err = h.h(j, j, k) - est.own(j, k);
            const std::complex<double> e_gain =
                (err.transpose() * set.b[size_t(j)].col(k)).value();
            a.leak.add(std::norm(e_gain));
          }
        }
        a.interf.add(interf);
      }
    }
  }

  const double noise = config.noise_power / config.downlink_snr;
  SinrReport rep;
  rep.num_cells = L;
  rep.users_per_cell = K;
  rep.gamma_mc = make_grid(L, K, kNaN);
  rep.ci95 = make_grid(L, K, kNaN);

  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < K; ++k) {
      const size_t u = size_t(j) * size_t(K) + size_t(k);
      // Pooled estimate over all trials.
      KahanSum g_re, g_im, leak, interf;
      std::vector<double> batch_gamma(kBatches);
      for (int b = 0; b < kBatches; ++b) {
        const UserAcc& a = acc[size_t(b)][u];
        const double nb = double(batch_count[size_t(b)]);
        const double ds =
            std::norm(std::complex<double>(a.g_re.value(), a.g_im.value()) /
                      nb);
        batch_gamma[size_t(b)] =
            ds / (a.leak.value() / nb + a.interf.value() / nb + noise);
        g_re.add(a.g_re.value());
        g_im.add(a.g_im.value());
        leak.add(a.leak.value());
        interf.add(a.interf.value());
      }
      const double n = double(n_trials);
      const double ds =
          std::norm(std::complex<double>(g_re.value(), g_im.value()) / n);
      rep.gamma_mc[j][k] =
          ds / (leak.value() / n + interf.value() / n + noise);

      double mean = 0.0;
      for (double g : batch_gamma) mean += g;
      mean /= kBatches;
      double var = 0.0;
      for (double g : batch_gamma) var += (g - mean) * (g - mean);
      var /= (kBatches - 1);
      rep.ci95[j][k] = kT975Df19 * std::sqrt(var / kBatches);
    }
  }
  return rep;
}

RateReport rate_lower_bound(const SinrReport& sinr, double prelog,
                            const SystemConfig& config) {
  if (!(prelog >= 0.0) || prelog > 1.0) {
    throw ConfigError("prelog must lie in [0, 1]");
  }
  const int L = sinr.num_cells;
  const int K = sinr.users_per_cell;

  RateReport rep;
  rep.prelog = prelog;
  rep.config_echo = config;
  rep.sinr = sinr;
  rep.rate_mc = make_grid(L, K, kNaN);
  rep.rate_cf = make_grid(L, K, kNaN);
  rep.cell_rate_mc.assign(size_t(L), kNaN);
  rep.cell_rate_cf.assign(size_t(L), kNaN);

  auto fill = [&](const std::vector<std::vector<double>>& gamma,
                  std::vector<std::vector<double>>& rate,
                  std::vector<double>& cell_totals, double& total) {
    if (gamma.empty()) return;
    KahanSum network;
    bool any = false;
    for (int j = 0; j < L; ++j) {
      KahanSum cell;
      bool cell_any = false;
      for (int k = 0; k < K; ++k) {
        const double g = gamma[size_t(j)][size_t(k)];
        if (std::isnan(g)) continue;
        rate[size_t(j)][size_t(k)] = prelog * std::log2(1.0 + g);
        cell.add(rate[size_t(j)][size_t(k)]);
        cell_any = true;
      }
      if (cell_any) {
        cell_totals[size_t(j)] = cell.value();
        network.add(cell.value());
        any = true;
      }
    }
    total = any ? network.value() : kNaN;
  };

  fill(sinr.gamma_mc, rep.rate_mc, rep.cell_rate_mc, rep.total_mc);
  fill(sinr.gamma_cf, rep.rate_cf, rep.cell_rate_cf, rep.total_cf);
  return rep;
}

RateReport rate_with_grouping(const LargeScaleMap& beta,
                              const SystemConfig& config, Precoder precoder) {
  if (!config.grouping_enabled) {
    throw ConfigError("rate_with_grouping requires grouping_enabled");
  }
  const GroupingResult grouping = group_users(beta, config);
  const PilotAssignment pa = allocate_pilots(config, grouping);
  const EstimateVarianceMap q = estimate_variance(beta, pa, config);

  SinrReport sinr =
      sinr_closed_form(beta, q, pa, config, config.sinr_mode, precoder);
  sinr.gamma_inf = asymptotic_ceiling(q, pa, config);

  const double prelog =
      1.0 - double(pa.pilot_length) / double(config.coherence_block);
  RateReport rep = rate_lower_bound(sinr, prelog, config);
  rep.pilot_length = pa.pilot_length;
  rep.grouping = grouping;
  rep.grouping_applied = true;
  return rep;
}

void write_rate_csv(const RateReport& report, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw SimError("cannot open '" + path + "' for writing");
  std::fputs(
      "cell,user,is_center,gamma_cf,gamma_mc,gamma_inf,ci95,rate_cf,rate_mc,"
      "prelog\n",
      f);
  const int L = report.sinr.num_cells;
  const int K = report.sinr.users_per_cell;
  auto cell_value = [](const std::vector<std::vector<double>>& grid, int j,
                       int k) {
    return grid.empty() ? kNaN : grid[size_t(j)][size_t(k)];
  };
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < K; ++k) {
      const bool center = report.grouping.is_center.empty()
                              ? true
                              : report.grouping.is_center[size_t(j)][size_t(k)];
      std::fprintf(f, "%d,%d,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                   j, k, center ? 1 : 0, cell_value(report.sinr.gamma_cf, j, k),
                   cell_value(report.sinr.gamma_mc, j, k),
                   cell_value(report.sinr.gamma_inf, j, k),
                   cell_value(report.sinr.ci95, j, k),
                   cell_value(report.rate_cf, j, k),
                   cell_value(report.rate_mc, j, k), report.prelog);
    }
  }
  std::fclose(f);
}

std::string rate_json_summary(const RateReport& report) {
  nlohmann::json j;
  j["prelog"] = report.prelog;
  j["pilot_length"] = report.pilot_length;
  j["seed"] = report.seed;
  j["grouping_applied"] = report.grouping_applied;
  j["total_rate_cf"] = report.total_cf;
  j["total_rate_mc"] = report.total_mc;
  j["cell_rate_cf"] = report.cell_rate_cf;
  j["cell_rate_mc"] = report.cell_rate_mc;
  if (!report.grouping.mu.empty()) {
    nlohmann::json g;
    g["mu"] = report.grouping.mu;
    std::vector<int> kc, ke;
    for (size_t i = 0; i < report.grouping.center.size(); ++i) {
      kc.push_back(int(report.grouping.center[i].size()));
      ke.push_back(int(report.grouping.edge[i].size()));
    }
    g["k_center"] = kc;
    g["k_edge"] = ke;
    j["grouping"] = g;
  }
  const SystemConfig& c = report.config_echo;
  j["config"] = {{"num_cells", c.num_cells},
                 {"users_per_cell", c.users_per_cell},
                 {"num_antennas", c.num_antennas},
                 {"uplink_pilot_snr", c.uplink_pilot_snr},
                 {"downlink_snr", c.downlink_snr},
                 {"noise_power", c.noise_power},
                 {"coherence_block", c.coherence_block},
                 {"pilot_reuse_factor", c.pilot_reuse_factor},
                 {"grouping_threshold", c.grouping_threshold},
                 {"grouping_enabled", c.grouping_enabled},
                 {"normalization_mode", to_string(c.normalization_mode)},
                 {"sinr_mode", to_string(c.sinr_mode)},
                 {"cell_radius", c.cell_radius},
                 {"min_distance", c.min_distance},
                 {"path_loss_exponent", c.path_loss_exponent},
                 {"shadowing_db", c.shadowing_db}};
  return j.dump(2);
}

}  // namespace pcsim
