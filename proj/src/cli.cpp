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

#include "pcsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pcsim/errors.hpp"
#include "pcsim/estimation.hpp"
#include "pcsim/geometry.hpp"
#include "pcsim/grouping.hpp"
#include "pcsim/large_scale.hpp"
#include "pcsim/pilots.hpp"
#include "pcsim/rate.hpp"
#include "pcsim/sweep.hpp"

namespace pcsim {

namespace {

std::vector<int> parse_values(const std::string& csv) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string tok =
        csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (tok.empty()) throw ConfigError("empty entry in --values");
    size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw ConfigError("bad value '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Shared scenario setup for the inspection subcommands.
struct Scenario {
  SystemConfig cfg;
  LargeScaleMap beta;
  PilotAssignment pa;
  EstimateVarianceMap q;
};

Scenario build_scenario(const std::string& config_path, uint64_t seed) {
  Scenario s;
  s.cfg = load_config(config_path);
  const CellGeometry geo =
      drop_users(build_layout(s.cfg), s.cfg, seed, /*drop=*/0);
  s.beta = compute_large_scale(geo, s.cfg, seed, /*drop=*/0);
  if (s.cfg.grouping_enabled) {
    s.pa = allocate_pilots(s.cfg, group_users(s.beta, s.cfg));
  } else {
    s.pa = allocate_pilots(s.cfg);
  }
  s.q = estimate_variance(s.beta, s.pa, s.cfg);
  return s;
}

int run_validate(const std::string& config_path, uint64_t seed) {
  const Scenario s = build_scenario(config_path, seed);
  const int L = s.cfg.num_cells;
  const int K = s.cfg.users_per_cell;
  std::printf("config OK: L=%d K=%d M=%d T_c=%d\n", L, K,
              s.cfg.num_antennas, s.cfg.coherence_block);
  std::printf("pilot length T_p=%d, prelog=%.6g\n", s.pa.pilot_length,
              1.0 - double(s.pa.pilot_length) / s.cfg.coherence_block);
  for (int j = 0; j < L; ++j) {
    double qmin = s.q(j, j, 0), qmax = qmin, qsum = 0.0;
    double bsum = 0.0;
    for (int k = 0; k < K; ++k) {
      const double v = s.q(j, j, k);
      qmin = std::min(qmin, v);
      qmax = std::max(qmax, v);
      qsum += v;
      bsum += s.beta.beta(j, j, k);
    }
    std::printf(
        "cell %d: own-link q mean=%.6g min=%.6g max=%.6g (beta mean=%.6g)\n",
        j, qsum / K, qmin, qmax, bsum / K);
  }
  return 0;
}

int run_ceiling(const std::string& config_path, uint64_t seed) {
  const Scenario s = build_scenario(config_path, seed);
  const auto ceiling = asymptotic_ceiling(s.q, s.pa, s.cfg);
  std::printf("cell,user,gamma_inf,rate_ceiling\n");
  for (int j = 0; j < s.cfg.num_cells; ++j) {
    for (int k = 0; k < s.cfg.users_per_cell; ++k) {
      const double g = ceiling[size_t(j)][size_t(k)];
      if (std::isinf(g)) {
        std::printf("%d,%d,inf,inf\n", j, k);
      } else {
        std::printf("%d,%d,%.10g,%.10g\n", j, k, g, std::log2(1.0 + g));
      }
    }
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"pcsim: multi-cell massive MIMO downlink simulator"};
  app.require_subcommand(1);

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "run a parameter sweep and write a CSV");
  std::string param_name = "antennas";
  std::string values_csv;
  std::string config_path;
  std::string out_path;
  std::string precoder_name = "both";
  std::string mode_name = "cf";
  std::string grouping_flag;
  int trials = 500;
  int drops = 10;
  uint64_t seed = 1;
  sweep_cmd->add_option("--param", param_name, "swept parameter")
      ->check(CLI::IsMember({"antennas", "pilot-reuse", "cells"}))
      ->required();
  sweep_cmd->add_option("--values", values_csv, "comma-separated sweep values")
      ->required();
  sweep_cmd->add_option("--config", config_path, "JSON config file")
      ->required();
  sweep_cmd->add_option("--trials", trials, "Monte Carlo trials per drop");
  sweep_cmd->add_option("--drops", drops, "independent user placements");
  sweep_cmd->add_option("--seed", seed, "master seed");
  sweep_cmd->add_option("--precoder", precoder_name, "precoder selection")
      ->check(CLI::IsMember({"mrt", "zf", "both"}));
  sweep_cmd->add_option("--mode", mode_name, "evaluation mode")
      ->check(CLI::IsMember({"mc", "cf", "both"}));
  sweep_cmd->add_option("--grouping", grouping_flag,
                        "override center/edge grouping (on|off)")
      ->check(CLI::IsMember({"on", "off"}));
  sweep_cmd->add_option("--out", out_path, "output CSV path")->required();

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "check a config and print a q summary");
  std::string validate_config;
  uint64_t validate_seed = 1;
  validate_cmd->add_option("--config", validate_config, "JSON config file")
      ->required();
  validate_cmd->add_option("--seed", validate_seed, "placement seed");

  // ceiling
  auto* ceiling_cmd = app.add_subcommand(
      "ceiling", "print the per-user pilot-contamination SINR ceiling");
  std::string ceiling_config;
  uint64_t ceiling_seed = 1;
  ceiling_cmd->add_option("--config", ceiling_config, "JSON config file")
      ->required();
  ceiling_cmd->add_option("--seed", ceiling_seed, "placement seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    std::fprintf(stderr, "%s", app.help().c_str());
    return 1;
  }

  try {
    if (sweep_cmd->parsed()) {
      SweepSpec spec;
      spec.base = load_config(config_path);
      if (grouping_flag == "on") spec.base.grouping_enabled = true;
      if (grouping_flag == "off") spec.base.grouping_enabled = false;
      spec.base.validate();
      if (param_name == "antennas") spec.param = SweepParam::kAntennas;
      if (param_name == "pilot-reuse") spec.param = SweepParam::kPilotReuse;
      if (param_name == "cells") spec.param = SweepParam::kCells;
      spec.values = parse_values(values_csv);
      spec.n_trials = trials;
      spec.n_drops = drops;
      spec.seed = seed;
      if (precoder_name == "mrt") {
        spec.precoders = {Precoder::kMrt};
      } else if (precoder_name == "zf") {
        spec.precoders = {Precoder::kZf};
      } else {
        spec.precoders = {Precoder::kMrt, Precoder::kZf};
      }
      const EvalMode cf_mode = spec.base.sinr_mode == SinrMode::kPaper
                                   ? EvalMode::kCfPaper
                                   : EvalMode::kCfConsistent;
      if (mode_name == "mc") {
        spec.modes = {EvalMode::kMonteCarlo};
      } else if (mode_name == "cf") {
        spec.modes = {cf_mode};
      } else {
        spec.modes = {EvalMode::kMonteCarlo, cf_mode};
      }
      const unsigned hw = std::thread::hardware_concurrency();
      const SweepResult result = run_sweep(spec, hw == 0 ? 1 : int(hw));
      emit_csv(result, out_path);
      std::printf("wrote %zu rows to %s\n", result.rows.size(),
                  out_path.c_str());
      return 0;
    }
    if (validate_cmd->parsed()) {
      return run_validate(validate_config, validate_seed);
    }
    if (ceiling_cmd->parsed()) {
      return run_ceiling(ceiling_config, ceiling_seed);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const SimError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace pcsim
