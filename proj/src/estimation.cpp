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

#include "pcsim/estimation.hpp"

#include <cmath>
#include <cstdio>

#include "pcsim/errors.hpp"

namespace pcsim {

namespace {

// 1 + rho_tr * sum of sharer gains seen at the observing BS.
double despread_power(const LargeScaleMap& beta, const PilotAssignment& pa,
                      const SystemConfig& config, int obs_bs, int cell,
                      int user) {
  double acc = 0.0;
  for (const UserRef& u : pa.sharer_set(cell, user)) {
    acc += beta.beta(obs_bs, u.cell, u.user);
  }
  return 1.0 + config.uplink_pilot_snr * acc;
}

}  // namespace

TrainingObservation synthesize_training(const ChannelRealization& h,
                                        const PilotAssignment& pa,
                                        const SystemConfig& config,
                                        const StreamKey& key) {
  const int L = int(pa.pilot_of.size());
  const int K = int(pa.pilot_of[0].size());
  const int M = int(h.h(0, 0, 0).size());
  const double amp = std::sqrt(config.uplink_pilot_snr);

  TrainingObservation obs;
  obs.xi.assign(size_t(L), std::vector<Eigen::VectorXcd>(size_t(K)));
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < K; ++k) {
      Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(M);
      for (const UserRef& u : pa.sharer_set(j, k)) {
        acc += h.h(j, u.cell, u.user);
      }
      acc *= amp;
      RngStream rng = key.stream(RngDomain::kTrainingNoise,
                                 uint32_t(j) * uint32_t(K) + uint32_t(k));
      for (int m = 0; m < M; ++m) {
        acc(m) += rng.next_cgauss();
      }
      obs.xi[j][k] = std::move(acc);
    }
  }
  return obs;
}

double mmse_coefficient(const LargeScaleMap& beta, const PilotAssignment& pa,
                        const SystemConfig& config, int obs_bs, int cell,
                        int user) {
  const double b = beta.beta(obs_bs, cell, user);
  if (b == 0.0) return 0.0;
  return std::sqrt(config.uplink_pilot_snr) * b /
         despread_power(beta, pa, config, obs_bs, cell, user);
}

EstimateVarianceMap estimate_variance(const LargeScaleMap& beta,
                                      const PilotAssignment& pa,
                                      const SystemConfig& config) {
  const int L = beta.num_cells();
  const int K = beta.users_per_cell();
  EstimateVarianceMap q(L, L, K, 0.0);
  for (int j = 0; j < L; ++j) {
    for (int l = 0; l < L; ++l) {
      for (int i = 0; i < K; ++i) {
        // BS j observes (l, i) only if one of its own users shares the pilot.
        if (pa.own_user(j, pa.pilot(l, i)) < 0) continue;
        const double b = beta.beta(j, l, i);
        q(j, l, i) = config.uplink_pilot_snr * b * b /
                     despread_power(beta, pa, config, j, l, i);
      }
    }
  }
  return q;
}

ChannelEstimate mmse_estimate(const TrainingObservation& xi,
                              const LargeScaleMap& beta,
                              const PilotAssignment& pa,
                              const SystemConfig& config) {
  const int L = beta.num_cells();
  const int K = beta.users_per_cell();

  ChannelEstimate est;
  est.h_hat = Tensor3<Eigen::VectorXcd>(L, L, K);
  est.q = estimate_variance(beta, pa, config);
  for (int j = 0; j < L; ++j) {
    for (int l = 0; l < L; ++l) {
      for (int i = 0; i < K; ++i) {
        const int own = pa.own_user(j, pa.pilot(l, i));
        if (own < 0) continue;
        const double c = mmse_coefficient(beta, pa, config, j, l, i);
        est.h_hat(j, l, i) = c * xi.xi[j][size_t(own)];
      }
    }
  }
  return est;
}

void dump_q_csv(const LargeScaleMap& beta, const EstimateVarianceMap& q,
                const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw SimError("cannot open '" + path + "' for writing");
  std::fputs("l,j,k,beta,q\n", f);
  for (int l = 0; l < q.dim0(); ++l) {
    for (int j = 0; j < q.dim1(); ++j) {
      for (int k = 0; k < q.dim2(); ++k) {
        std::fprintf(f, "%d,%d,%d,%.10g,%.10g\n", l, j, k, beta.beta(l, j, k),
                     q(l, j, k));
      }
    }
  }
  std::fclose(f);
}

}  // namespace pcsim
