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

#include "pcsim/precoding.hpp"

#include <cmath>
#include <string>

#include "pcsim/errors.hpp"

namespace pcsim {

const char* to_string(Precoder p) { return p == Precoder::kMrt ? "mrt" : "zf"; }

PrecoderSet mrt_precoder(const ChannelEstimate& est,
                         const SystemConfig& config) {
  const int L = est.q.dim0();
  const int K = est.q.dim2();
  const int M = config.num_antennas;

  PrecoderSet set;
  set.mode = Precoder::kMrt;
  set.normalization = config.normalization_mode;
  set.b.assign(size_t(L), Eigen::MatrixXcd(M, K));

  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      const Eigen::VectorXcd& hhat = est.own(l, k);
      Eigen::VectorXcd col = hhat.conjugate();
      if (config.normalization_mode == NormalizationMode::kStatistical) {
        const double scale = double(M) * est.q(l, l, k);
        if (scale <= 0.0) {
          throw DegenerateEstimate(
              "DegenerateEstimate: zero estimate variance for cell " +
              std::to_string(l) + " user " + std::to_string(k));
        }
        col /= std::sqrt(scale);
      } else {
        const double n = col.norm();
        if (n == 0.0) {
          throw DegenerateEstimate(
              "DegenerateEstimate: zero estimate for cell " +
              std::to_string(l) + " user " + std::to_string(k));
        }
        col /= n;
      }
      set.b[l].col(k) = col;
    }
  }
  return set;
}

PrecoderSet zf_precoder(const ChannelEstimate& est,
                        const SystemConfig& config) {
  const int L = est.q.dim0();
  const int K = est.q.dim2();
  const int M = config.num_antennas;
  if (M <= K) {
    throw InsufficientAntennas("InsufficientAntennas: zero forcing needs M > K (M=" +
                               std::to_string(M) + ", K=" + std::to_string(K) +
                               ")");
  }

  PrecoderSet set;
  set.mode = Precoder::kZf;
  set.normalization = config.normalization_mode;
  set.b.assign(size_t(L), Eigen::MatrixXcd(M, K));

  for (int l = 0; l < L; ++l) {
    // Receive convention r = h^T y, so the raw precoder is
    // A (A^H A)^(-1) with A = conj(Hhat_own): then hhat_i^T b_k = delta_ik.
    Eigen::MatrixXcd a(M, K);
    for (int k = 0; k < K; ++k) {
      a.col(k) = est.own(l, k).conjugate();
    }
    const Eigen::MatrixXcd gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success) {
      throw SingularGram("SingularGram: eigensolver failed for cell " +
                         std::to_string(l));
    }
    const auto& ev = es.eigenvalues();
    const double lo = ev(0);
    const double hi = ev(K - 1);
    if (!(lo > 0.0) || !(hi / lo <= 1e12)) {
      throw SingularGram("SingularGram: Gram condition number exceeds 1e12 "
                         "for cell " +
                         std::to_string(l));
    }
    const Eigen::MatrixXcd gram_inv =
        es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
        es.eigenvectors().adjoint();
    Eigen::MatrixXcd raw = a * gram_inv;

    for (int k = 0; k < K; ++k) {
      if (config.normalization_mode == NormalizationMode::kStatistical) {
        const double scale = double(M - K) * est.q(l, l, k);
        if (scale <= 0.0) {
          throw DegenerateEstimate(
              "DegenerateEstimate: zero estimate variance for cell " +
              std::to_string(l) + " user " + std::to_string(k));
        }
        set.b[l].col(k) = raw.col(k) * std::sqrt(scale);
      } else {
        const double n = raw.col(k).norm();
        set.b[l].col(k) = raw.col(k) / n;
      }
    }
  }
  return set;
}

std::vector<Eigen::VectorXcd> transmit_signal(
    const PrecoderSet& precoder, const std::vector<Eigen::VectorXcd>& symbols,
    const SystemConfig& config) {
  if (symbols.size() != precoder.b.size()) {
    throw SimError("transmit_signal: one symbol vector per cell required");
  }
  const double amp = std::sqrt(config.downlink_snr);
  std::vector<Eigen::VectorXcd> y(precoder.b.size());
  for (size_t l = 0; l < precoder.b.size(); ++l) {
    if (symbols[l].size() != precoder.b[l].cols()) {
      throw SimError("transmit_signal: symbol count must equal K");
    }
    y[l] = amp * (precoder.b[l] * symbols[l]);
  }
  return y;
}

}  // namespace pcsim
