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

#include "pcsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "pcsim/errors.hpp"
#include "pcsim/geometry.hpp"
#include "pcsim/tensor.hpp"

namespace pcsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* error_name(const SimError& e) {
  if (dynamic_cast<const PilotOverheadExceedsCoherence*>(&e) != nullptr)
    return "PilotOverheadExceedsCoherence";
  if (dynamic_cast<const InsufficientAntennas*>(&e) != nullptr)
    return "InsufficientAntennas";
  if (dynamic_cast<const SingularGram*>(&e) != nullptr) return "SingularGram";
  if (dynamic_cast<const DegenerateEstimate*>(&e) != nullptr)
    return "DegenerateEstimate";
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return "ConfigError";
  return "SimError";
}

SystemConfig derive_config(const SweepSpec& spec, int value) {
  SystemConfig cfg = spec.base;
  switch (spec.param) {
    case SweepParam::kAntennas:
      cfg.num_antennas = value;
      break;
    case SweepParam::kPilotReuse:
      cfg.pilot_reuse_factor = value;
      break;
    case SweepParam::kCells:
      cfg.num_cells = value;
      break;
  }
  return cfg;
}

struct ComboOutcome {
  std::vector<std::vector<double>> gamma;
  std::vector<std::vector<double>> ci;
  std::string error;
  double seconds = 0.0;
};

struct DropOutcome {
  double prelog = kNaN;
  int k_center = 0;
  int k_edge = 0;
  std::string shared_error;
  std::vector<std::vector<ComboOutcome>> combos;  // [precoder][mode]
};

// Canonical orderings give rows sorted by (value, precoder, mode).
std::vector<Precoder> canonical_precoders(const SweepSpec& spec) {
  std::vector<Precoder> out;
  for (Precoder p : {Precoder::kMrt, Precoder::kZf}) {
    if (std::find(spec.precoders.begin(), spec.precoders.end(), p) !=
        spec.precoders.end()) {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<EvalMode> canonical_modes(const SweepSpec& spec) {
  std::vector<EvalMode> out;
  for (EvalMode m :
       {EvalMode::kMonteCarlo, EvalMode::kCfConsistent, EvalMode::kCfPaper}) {
    if (std::find(spec.modes.begin(), spec.modes.end(), m) !=
        spec.modes.end()) {
      out.push_back(m);
    }
  }
  return out;
}

DropOutcome evaluate_drop(const SweepSpec& spec,
                          const std::vector<Precoder>& precoders,
                          const std::vector<EvalMode>& modes,
                          const SystemConfig& cfg, uint32_t drop) {
  DropOutcome out;
  out.combos.assign(precoders.size(),
                    std::vector<ComboOutcome>(modes.size()));
  try {
    const CellGeometry geo =
        drop_users(build_layout(cfg), cfg, spec.seed, drop);
    const LargeScaleMap beta = compute_large_scale(geo, cfg, spec.seed, drop);
    const GroupingResult grouping = group_users(beta, cfg);
    out.k_center = grouping.total_center();
    out.k_edge = grouping.total_edge();
    const PilotAssignment pa =
        cfg.grouping_enabled
            ? allocate_pilots(cfg, grouping)
            : allocate_pilots(cfg);
    const EstimateVarianceMap q = estimate_variance(beta, pa, cfg);
    out.prelog = 1.0 - double(pa.pilot_length) / double(cfg.coherence_block);

    for (size_t pi = 0; pi < precoders.size(); ++pi) {
      for (size_t mi = 0; mi < modes.size(); ++mi) {
        ComboOutcome& combo = out.combos[pi][mi];
        const auto start = std::chrono::steady_clock::now();
        try {
          if (modes[mi] == EvalMode::kMonteCarlo) {
            const SinrReport rep =
                sinr_monte_carlo(beta, pa, cfg, precoders[pi], spec.n_trials,
                                 spec.seed, drop);
            combo.gamma = rep.gamma_mc;
            combo.ci = rep.ci95;
          } else {
            const SinrMode mode = modes[mi] == EvalMode::kCfPaper
                                      ? SinrMode::kPaper
                                      : SinrMode::kConsistent;
            const SinrReport rep =
                sinr_closed_form(beta, q, pa, cfg, mode, precoders[pi]);
            combo.gamma = rep.gamma_cf;
          }
        } catch (const SimError& e) {
          combo.error = error_name(e);
        }
        combo.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
      }
    }
  } catch (const SimError& e) {
    out.shared_error = error_name(e);
  } catch (const std::exception& e) {
    out.shared_error = e.what();
  }
  return out;
}

}  // namespace

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kAntennas:
      return "antennas";
    case SweepParam::kPilotReuse:
      return "pilot-reuse";
    case SweepParam::kCells:
      return "cells";
  }
  return "?";
}

const char* to_string(EvalMode m) {
  switch (m) {
    case EvalMode::kMonteCarlo:
      return "mc";
    case EvalMode::kCfConsistent:
      return "cf_consistent";
    case EvalMode::kCfPaper:
      return "cf_paper";
  }
  return "?";
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
  if (spec.values.empty()) throw ConfigError("sweep values must be nonempty");
  for (size_t i = 1; i < spec.values.size(); ++i) {
    if (spec.values[i] <= spec.values[i - 1]) {
      throw ConfigError("sweep values must be strictly increasing");
    }
  }
  if (spec.precoders.empty()) throw ConfigError("no precoder selected");
  if (spec.modes.empty()) throw ConfigError("no evaluation mode selected");
  if (spec.n_drops < 1) throw ConfigError("n_drops must be >= 1");

  const std::vector<Precoder> precoders = canonical_precoders(spec);
  const std::vector<EvalMode> modes = canonical_modes(spec);

  // Every derived config must be valid before any work starts.
  std::vector<SystemConfig> configs;
  for (int v : spec.values) {
    SystemConfig cfg = derive_config(spec, v);
    cfg.validate();
    configs.push_back(cfg);
  }

  // One task per (value, drop); results land in preassigned slots, so the
  // outcome is identical for any worker count.
  const size_t n_values = spec.values.size();
  const size_t n_drops = size_t(spec.n_drops);
  std::vector<std::vector<DropOutcome>> outcomes(
      n_values, std::vector<DropOutcome>(n_drops));

  std::atomic<size_t> next_task{0};
  const size_t n_tasks = n_values * n_drops;
  auto worker_fn = [&]() {
    for (;;) {
      const size_t t = next_task.fetch_add(1);
      if (t >= n_tasks) break;
      const size_t vi = t / n_drops;
      const size_t di = t % n_drops;
      outcomes[vi][di] = evaluate_drop(spec, precoders, modes, configs[vi],
                                       uint32_t(di));
    }
  };
  const int n_workers =
      std::max(1, std::min<int>(workers, int(n_tasks)));
  if (n_workers == 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  result.spec = spec;
  for (size_t vi = 0; vi < n_values; ++vi) {
    const int L = configs[vi].num_cells;
    const int K = configs[vi].users_per_cell;
    for (size_t pi = 0; pi < precoders.size(); ++pi) {
      for (size_t mi = 0; mi < modes.size(); ++mi) {
        SweepRow row;
        row.value = spec.values[vi];
        row.precoder = precoders[pi];
        row.mode = modes[mi];
        row.seed = spec.seed;

        KahanSum agg, mean_user, db_mean, ci_mean, prelog_sum, kc, ke;
        std::vector<KahanSum> cells(static_cast<size_t>(L));
        double runtime = 0.0;
        for (size_t di = 0; di < n_drops && row.error.empty(); ++di) {
          const DropOutcome& d = outcomes[vi][di];
          if (!d.shared_error.empty()) {
            row.error = d.shared_error;
            break;
          }
          const ComboOutcome& combo = d.combos[pi][mi];
          runtime += combo.seconds;
          if (!combo.error.empty()) {
            row.error = combo.error;
            break;
          }
          KahanSum network, db;
          for (int j = 0; j < L; ++j) {
            KahanSum cell;
            for (int k = 0; k < K; ++k) {
              const double g = combo.gamma[size_t(j)][size_t(k)];
              cell.add(d.prelog * std::log2(1.0 + g));
              db.add(10.0 * std::log10(g));
              if (!combo.ci.empty()) {
                ci_mean.add(combo.ci[size_t(j)][size_t(k)]);
              }
            }
            cells[size_t(j)].add(cell.value());
            network.add(cell.value());
          }
          agg.add(network.value() / double(L));
          mean_user.add(network.value() / double(L * K));
          db_mean.add(db.value() / double(L * K));
          prelog_sum.add(d.prelog);
          kc.add(double(d.k_center));
          ke.add(double(d.k_edge));
        }
        row.runtime_seconds = runtime;
        if (row.error.empty()) {
          const double nd = double(n_drops);
          row.aggregate_rate = agg.value() / nd;
          row.rate_mean_user = mean_user.value() / nd;
          row.sinr_db_mean = db_mean.value() / nd;
          row.ci95 = ci_mean.value() / (nd * L * K);
          row.prelog = prelog_sum.value() / nd;
          row.k_center = kc.value() / nd;
          row.k_edge = ke.value() / nd;
          row.cell_rates.resize(size_t(L));
          for (int j = 0; j < L; ++j) {
            row.cell_rates[size_t(j)] = cells[size_t(j)].value() / nd;
          }
        } else {
          row.aggregate_rate = kNaN;
          row.rate_mean_user = kNaN;
          row.sinr_db_mean = kNaN;
          row.ci95 = kNaN;
          row.prelog = kNaN;
          row.k_center = kNaN;
          row.k_edge = kNaN;
        }
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

std::string sweep_csv_text(const SweepResult& result) {
  std::string out =
      "swept_param,value,precoder,mode,rate_total,rate_mean_user,"
      "sinr_db_mean,ci95,prelog,k_center,k_edge,seed,error\n";
  char buf[512];
  for (const SweepRow& row : result.rows) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%d,%s,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%llu,%s\n",
                  to_string(result.spec.param), row.value,
                  to_string(row.precoder), to_string(row.mode),
                  row.aggregate_rate, row.rate_mean_user, row.sinr_db_mean,
                  row.ci95, row.prelog, row.k_center, row.k_edge,
                  static_cast<unsigned long long>(row.seed),
                  row.error.c_str());
    out += buf;
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  const std::string text = sweep_csv_text(result);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw SimError("cannot open '" + path + "' for writing");
  const size_t written = std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
  if (written != text.size()) {
    throw SimError("short write to '" + path + "'");
  }
}

}  // namespace pcsim
