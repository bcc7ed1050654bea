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

#include <stdexcept>
#include <string>

namespace pcsim {

/// Base class for all simulator errors.
class SimError : public std::runtime_error {
 public:
  explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (bad field values, unknown config keys, ...).
class ConfigError : public SimError {
 public:
  explicit ConfigError(const std::string& what) : SimError(what) {}
};

/// Pilot book does not fit into the coherence block (T_p >= T_c).
class PilotOverheadExceedsCoherence : public ConfigError {
 public:
  explicit PilotOverheadExceedsCoherence(const std::string& what)
      : ConfigError(what) {}
};

/// Zero-forcing requested with M <= K.
class InsufficientAntennas : public SimError {
 public:
  explicit InsufficientAntennas(const std::string& what) : SimError(what) {}
};

/// Estimate Gram matrix is numerically singular; no silent regularization.
class SingularGram : public SimError {
 public:
  explicit SingularGram(const std::string& what) : SimError(what) {}
};

/// Statistical normalization impossible because an estimate variance is zero.
class DegenerateEstimate : public SimError {
 public:
  explicit DegenerateEstimate(const std::string& what) : SimError(what) {}
};

}  // namespace pcsim
