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

namespace pcsim {

/// Entry point behind the `pcsim` binary; exposed for in-process testing.
/// Exit codes: 0 success, 1 configuration/usage error, 2 runtime error.
int cli_main(int argc, const char* const* argv);

}  // namespace pcsim
