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
#include <cmath>
#include <complex>
#include <cstdint>

namespace pcsim {

/// Philox-4x32-10 counter-based block cipher (Salmon et al., SC 2011).
/// Every random quantity in the simulator is addressed, not sequenced:
/// the 128-bit counter encodes (domain, drop, trial/aux, element, block),
/// so any substream can be regenerated independently of evaluation order
/// or worker count.
struct Philox4x32 {
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                       std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = uint64_t(kMul0) * ctr[0];
      const uint64_t p1 = uint64_t(kMul1) * ctr[2];
      const std::array<uint32_t, 4> next = {
          uint32_t(p1 >> 32) ^ ctr[1] ^ key[0],
          uint32_t(p1),
          uint32_t(p0 >> 32) ^ ctr[3] ^ key[1],
          uint32_t(p0),
      };
      ctr = next;
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

/// Domain tags keep unrelated substreams (placement, shadowing, fading,
/// training noise, ...) statistically disjoint under one master seed.
enum class RngDomain : uint32_t {
  kPlacement = 1,
  kShadowing = 2,
  kSmallScale = 3,
  kTrainingNoise = 4,
  kDataSymbols = 5,
  kTest = 200,
};

/// One addressed substream: (seed, domain, drop, a, b) pins the stream,
/// an internal block counter walks along it.  Draws are deterministic and
/// independent across distinct addresses.
class RngStream {
 public:
  RngStream(uint64_t seed, RngDomain domain, uint32_t drop, uint32_t a,
            uint32_t b)
      : key_{uint32_t(seed), uint32_t(seed >> 32)},
        prefix_{0u, b, a, (uint32_t(domain) << 24) | (drop & 0xFFFFFFu)} {}

  uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  /// Uniform double in [0,1) with 53 random bits.
  double next_unit() {
    const uint64_t hi = next_u32();
    const uint64_t lo = next_u32();
    const uint64_t bits = ((hi << 32) | lo) >> 11;
    return double(bits) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; pairs are cached.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const auto [z0, z1] = normal_pair();
    cached_ = z1;
    have_cached_ = true;
    return z0;
  }

  /// Circularly-symmetric complex Gaussian, unit variance:
  /// re, im ~ N(0, 1/2) independent.
  std::complex<double> next_cgauss() {
    const auto [z0, z1] = normal_pair();
    return {z0 * kInvSqrt2, z1 * kInvSqrt2};
  }

 private:
  static constexpr double kInvSqrt2 = 0.70710678118654752440;

  std::pair<double, double> normal_pair() {
    const double u1 = 1.0 - next_unit();  // (0, 1]
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    return {r * std::cos(ang), r * std::sin(ang)};
  }

  void refill() {
    std::array<uint32_t, 4> ctr = prefix_;
    ctr[0] = block_;
    buf_ = Philox4x32::block(ctr, key_);
    ++block_;
    pos_ = 0;
  }

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> prefix_;
  uint32_t block_ = 0;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

/// Handle identifying the per-(drop, trial) random context of one Monte
/// Carlo evaluation; modules derive their element substreams from it.
struct StreamKey {
  uint64_t seed = 1;
  uint32_t drop = 0;
  uint32_t trial = 0;

  RngStream stream(RngDomain domain, uint32_t element) const {
    return RngStream(seed, domain, drop, trial, element);
  }
};

}  // namespace pcsim
