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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mdslab/dynamics.hpp"
#include "mdslab/errors.hpp"
#include "mdslab/model.hpp"

namespace mds::cli {

inline constexpr int kSchemaVersion = 1;

/// All schema violations found in one config, each prefixed by its JSON path.
class ConfigViolations : public ConfigError {
 public:
  explicit ConfigViolations(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct InitialStateSpec {
  enum class Kind { gibbs, diagonal, pure_excited, matrix };
  Kind kind = Kind::pure_excited;
  double beta = 1.0;              // gibbs
  std::vector<double> diagonal;   // diagonal, in the H eigenbasis
  Matrix matrix;                  // matrix
};

inline constexpr double kPureExcitedMixing = 1e-6;

struct OnsagerSpec {
  std::optional<double> beta;  // defaults to the first bath
  double dx = 1e-3;
};

struct RunSpec {
  double t0 = 0.0;
  double t1 = 20.0;
  int samples = 101;
  InitialStateSpec initial;
  IntegratorOptions integrator;
  SteadyStateOptions steady;
  OnsagerSpec onsager;
  int quadrature_nodes = 32;
  std::optional<double> verify_collision_time;
};

struct OutputSpec {
  std::filesystem::path dir = "mdslab_out";
  int stride = 1;
  bool write_state = false;
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 0;
  SystemModel model;
  RunSpec run;
  OutputSpec output;

  double reference_beta() const;
  /// Smallest nonzero Bohr frequency of H; sets the time scale of the T sweep.
  double reference_energy() const;
};

/// Throws ConfigViolations listing every problem, or ConfigError on malformed JSON.
ScenarioConfig parse_config_text(const std::string& text, std::optional<std::uint64_t> seed_override = {});
ScenarioConfig parse_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});

QuantumState make_initial_state(const ScenarioConfig& cfg);

}  // namespace mds::cli
