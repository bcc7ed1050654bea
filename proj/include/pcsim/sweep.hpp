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

#include <cstdint>
#include <string>
#include <vector>

#include "pcsim/config.hpp"
#include "pcsim/precoding.hpp"
#include "pcsim/rate.hpp"

namespace pcsim {

enum class SweepParam { kAntennas, kPilotReuse, kCells };
enum class EvalMode { kMonteCarlo, kCfConsistent, kCfPaper };

const char* to_string(SweepParam p);
const char* to_string(EvalMode m);

/// One sweep: vary a single parameter over `values`, average each point
/// over n_drops user placements times n_trials channel draws.
struct SweepSpec {
  SweepParam param = SweepParam::kAntennas;
  std::vector<int> values;  // nonempty, strictly increasing
  SystemConfig base;
  int n_trials = 500;
  int n_drops = 10;
  uint64_t seed = 1;
  std::vector<Precoder> precoders = {Precoder::kMrt, Precoder::kZf};
  std::vector<EvalMode> modes = {EvalMode::kCfConsistent};
};

/// One output row per (value, precoder, mode).  aggregate_rate is the mean
/// per-cell sum rate in bits/s/Hz (network sum divided by L), averaged over
/// drops.  Rows that fail per-module preconditions carry the error name
/// instead of aborting the sweep.
struct SweepRow {
  int value = 0;
  Precoder precoder = Precoder::kMrt;
  EvalMode mode = EvalMode::kCfConsistent;
  double aggregate_rate = 0.0;  // per-cell sum rate
  double rate_mean_user = 0.0;
  double sinr_db_mean = 0.0;
  double ci95 = 0.0;  // mean CI half-width on gamma_mc (0 for closed form)
  double prelog = 0.0;
  double k_center = 0.0;  // mean total center users per drop
  double k_edge = 0.0;
  std::vector<double> cell_rates;  // per-cell sums, drop-averaged
  uint64_t seed = 0;
  std::string error;  // empty on success
  double runtime_seconds = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // sorted by (value, precoder, mode)
};

/// Runs the sweep.  Drops are distributed over `workers` threads; every
/// reduction happens in fixed (value, drop) order, so the result is
/// bit-identical for any worker count.
SweepResult run_sweep(const SweepSpec& spec, int workers = 1);

/// Writes the fixed-schema CSV:
/// swept_param,value,precoder,mode,rate_total,rate_mean_user,sinr_db_mean,
/// ci95,prelog,k_center,k_edge,seed,error
/// Rows sorted by (value, precoder, mode); byte-stable across runs.
void emit_csv(const SweepResult& result, const std::string& path);

/// CSV text without touching the filesystem (same bytes emit_csv writes).
std::string sweep_csv_text(const SweepResult& result);

}  // namespace pcsim
