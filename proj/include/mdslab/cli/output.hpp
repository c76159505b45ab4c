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
#include <string>
#include <vector>

#include <json.hpp>

#include "mdslab/dynamics.hpp"

namespace mds::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kOutputSchemaVersion = 1;

Json matrix_json(const Matrix& m);
Json real_matrix_json(const RealMatrix& m);
Json complex_list_json(const std::vector<cplx>& values);
/// Non-finite numbers become null.
Json number_json(double x);

/// Pretty-printed with a trailing newline; stamps "schema_version" first.
void write_json(const std::filesystem::path& path, const std::string& kind, Json body);

std::vector<std::string> trajectory_columns(std::size_t baths, Eigen::Index dim, bool with_state);
/// RFC 4180 CSV, 17 significant digits, preceded by a "# schema_version=1" line.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, std::size_t baths,
                          int stride, bool with_state);

}  // namespace mds::cli
