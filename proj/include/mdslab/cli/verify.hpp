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
#include <random>
#include <string>
#include <vector>

#include "mdslab/cli/config.hpp"
#include "mdslab/dynamics.hpp"
#include "mdslab/linres.hpp"

namespace mds::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Everything a check needs; built from a ScenarioConfig or by hand in tests.
struct VerifyContext {
  SystemModel model;
  std::uint64_t seed = 0;
  double beta = 1.0;              // reference temperature for linearization and Onsager
  double energy = 1.0;            // time scale of the T sweep
  double collision_time = 2.0;    // gaussian scheme used where a check runs all schemes
  double t_end = 20.0;
  double onsager_dx = 1e-3;
  int quadrature_nodes = 32;
  IntegratorOptions integrator;
  SteadyStateOptions steady;
  int threads = 1;

  static VerifyContext from_config(const ScenarioConfig& cfg, int threads);
};

std::mt19937_64 check_rng(std::uint64_t seed, std::uint64_t stream);
/// Ginibre state X X^dagger + 1e-3 * 1, normalized.
QuantumState random_state(std::mt19937_64& rng, Eigen::Index dim);
Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim);

/// The model with every bath switched to `scheme` (beta and couplings kept).
SystemModel with_scheme(const SystemModel& model, const CouplingScheme& scheme);
std::vector<CouplingScheme> all_schemes(double collision_time);

/// Trajectories from random initial states, shared by the entropy and positivity checks.
struct TrajectoryBundle {
  std::vector<std::string> labels;
  std::vector<Trajectory> trajectories;
  std::vector<std::string> failures;
};
TrajectoryBundle trajectory_bundle(const VerifyContext& ctx, int per_scheme = 5);

CheckResult check_davies_equivalence(const VerifyContext& ctx, int states = 50);
CheckResult check_detailed_balance(const VerifyContext& ctx);
CheckResult check_entropy_production_sign(const VerifyContext& ctx, const TrajectoryBundle& bundle,
                                          int states = 200);
CheckResult check_gibbs_steady_state(const VerifyContext& ctx, int starts = 5);
CheckResult check_onsager_symmetry(const VerifyContext& ctx);
CheckResult check_onsager_positivity(const VerifyContext& ctx);
CheckResult check_onsager_finite_difference(const VerifyContext& ctx);
CheckResult check_positivity_guard_stats(const VerifyContext& ctx, const TrajectoryBundle& bundle);
CheckResult check_generator_spectrum(const VerifyContext& ctx);
CheckResult check_linearization_consistency(const VerifyContext& ctx);
CheckResult check_t_limit_convergence(const VerifyContext& ctx);
CheckResult check_ancilla_positivity(const VerifyContext& ctx);
CheckResult check_oracle_equivalences(const VerifyContext& ctx);

/// Time-domain quadrature of int e^{i nu t} sqrt(delta(t,T)) e^{iHt} R e^{-iHt} dt.
Matrix gaussian_window_time_integral(const Matrix& hamiltonian, const Matrix& coupling, double collision_time,
                                     double nu);
/// int_0^1 rho^l A rho^{1-l} dl by Gauss-Legendre quadrature.
Matrix krho_quadrature(const QuantumState& rho, const Matrix& a, int nodes = 64);

/// Runs every check concurrently; results come back in a fixed order. A check that
/// throws is reported as a failure and the battery continues.
std::vector<CheckResult> verify_battery(const VerifyContext& ctx);

}  // namespace mds::cli
