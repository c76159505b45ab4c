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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mdslab/cli/config.hpp"
#include "mdslab/cli/scenario.hpp"

using namespace mds;
using namespace mds::cli;

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear modular dynamical semigroup simulator"};
  std::string command;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("command", command, "simulate | steady | onsager | spectrum | verify")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--config", config, "JSON scenario file")->required();
  auto* out_opt = app.add_option("--out", out, "output directory (overrides output.dir)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config seed)");
  app.add_option("--threads", threads, "worker threads (default: MDSLAB_THREADS, else all cores)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    const ScenarioConfig cfg =
        parse_config(config, seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    RunOptions opts;
    if (out_opt->count()) opts.out_dir = out;
    opts.threads = threads;
    return run_scenario(command, cfg, opts, std::cout);
  } catch (const ConfigError& e) {
    fmt::print(std::cerr, "config error: {}\n", e.what());
    return kExitConfigError;
  } catch (const InputError& e) {
    fmt::print(std::cerr, "config error: {}\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "numeric failure: {}\n", e.what());
    return kExitNumericFailure;
  }
}
