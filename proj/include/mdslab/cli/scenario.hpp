// Copyright 2026 The mdslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mdslab/cli/config.hpp"

namespace mds::cli {

enum ExitCode : int { kExitOk = 0, kExitCheckFailure = 1, kExitConfigError = 2, kExitNumericFailure = 3 };

const std::vector<std::string>& commands();

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides output.dir
  int threads = 0;                               // 0: MDSLAB_THREADS or hardware concurrency
};

/// Dispatches one command, writes its artifacts and prints a summary to `log`.
/// Numeric failures inside the integrator are reported with a dump of the last
/// good state and exit code 3; other exceptions propagate.
int run_scenario(const std::string& command, const ScenarioConfig& cfg, const RunOptions& opts, std::ostream& log);

}  // namespace mds::cli
