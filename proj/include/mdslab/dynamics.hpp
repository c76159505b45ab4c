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

#include <optional>
#include <string>
#include <vector>

#include "mdslab/dissipator.hpp"
#include "mdslab/errors.hpp"

namespace mds {

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  double max_step = 1.0;
  double positivity_floor = 1e-12;
  int max_retries = 30;
  long max_steps = 5'000'000;

  void validate() const;
};

struct IntegratorStats {
  long accepted = 0;
  long error_rejections = 0;
  long guard_retries = 0;  // positivity or trace-drift rejections
  long rhs_evaluations = 0;
  double max_trace_drift = 0.0;
};

/// Thermodynamic observables of one state.
struct ObservableRecord {
  double time = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double sigma_total = 0.0;
  std::vector<double> sigma;  // per bath
  std::vector<double> flux;   // entropy flux J_S per bath
  double rel_entropy_to_gibbs = 0.0;
  double min_eig = 0.0;
  double trace_drift = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::vector<ObservableRecord> observables;
  IntegratorStats stats;
};

/// Integration gave up: the positivity guard or the trace check kept rejecting.
class IntegrationFailure : public NumericError {
 public:
  IntegrationFailure(const std::string& what, QuantumState last_good, double time)
      : NumericError(what), last_good_(std::move(last_good)), time_(time) {}
  const QuantumState& last_good_state() const { return last_good_; }
  double time() const { return time_; }

 private:
  QuantumState last_good_;
  double time_;
};

/// Dormand-Prince 5(4) with PI step control. After every accepted step the state
/// is Hermitized, its trace drift checked (< 1e-8) and renormalized, and the step
/// is rejected and halved if the smallest eigenvalue falls below the floor.
/// States are recorded at `sample_times` (sorted, within [t0, t1]).
Trajectory integrate(const QuantumState& rho0, const PreparedModel& model, double t0, double t1,
                     const std::vector<double>& sample_times, const IntegratorOptions& opts = {},
                     bool record_observables = true);

/// Uniform samples including both endpoints.
std::vector<double> uniform_samples(double t0, double t1, int count);

/// State at t1 only.
QuantumState evolve(const QuantumState& rho0, const PreparedModel& model, double t0, double t1,
                    const IntegratorOptions& opts, IntegratorStats* stats = nullptr);

struct EntropyProduction {
  std::vector<double> per_bath;  // sigma_j = tr(rho [[dS_j, dS_j]]_j)
  double total = 0.0;
  double entropy_rate = 0.0;      // dS/dt = -tr(drho/dt ln rho)
  std::vector<double> flux;       // J_S,j = -beta_j tr(D^d_j H)
  double balance_gap = 0.0;       // |total - (entropy_rate + sum flux)|
};

EntropyProduction entropy_production(const QuantumState& rho, const PreparedModel& model);

/// S, J_S per bath, <H>, relative entropy to the Gibbs state of the first bath.
ObservableRecord entropy_and_flux(const QuantumState& rho, const PreparedModel& model);

/// tr(rho (ln rho - ln rho_beta))
double relative_entropy_to_gibbs(const QuantumState& rho, const Matrix& hamiltonian, double beta);

struct SteadyStateOptions {
  double chunk = 10.0;           // integration time between residual checks
  double max_time = 1e4;
  double switch_tolerance = 1e-7;  // RHS max norm at which Newton takes over
  double rhs_tolerance = 1e-11;
  double step_tolerance = 1e-12;   // trace distance between Newton iterates
  int max_newton = 30;
  IntegratorOptions integrator;
};

struct SteadyStateResult {
  QuantumState state;
  bool converged = false;
  double rhs_residual = 0.0;
  double last_newton_step = 0.0;
  int newton_iterations = 0;
  double integration_time = 0.0;
  std::vector<double> residual_history;
  bool ergodic = true;
  std::string warning;
};

SteadyStateResult steady_state(const PreparedModel& model, const SteadyStateOptions& opts = {},
                               std::optional<QuantumState> initial = std::nullopt);

/// Complex-linear extension of the central-difference derivative of the full RHS at rho.
Superoperator numerical_rhs_jacobian(const PreparedModel& model, const QuantumState& rho);

/// Tensor-extends every bath: H -> H x 1 + 1 x H', R -> R x 1 + 1 x R'.
SystemModel ancilla_extend(const SystemModel& model, const Matrix& ancilla_hamiltonian,
                           const Matrix& ancilla_coupling, Eigen::Index max_dim = 16);

}  // namespace mds
