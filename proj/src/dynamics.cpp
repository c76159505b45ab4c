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

#include "mdslab/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mds {

namespace {

constexpr double kTraceDriftLimit = 1e-8;
constexpr double kMinRelativeStep = 1e-12;

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kB{35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
constexpr std::array<double, 7> kBStar{5179.0 / 57600, 0,           7571.0 / 16695, 393.0 / 640,
                                       -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

Matrix rhs_of(const Matrix& rho, const PreparedModel& model, IntegratorStats& stats) {
  ++stats.rhs_evaluations;
  const QuantumState s = QuantumState::normalized(rho);
  const double tr = hermitize(rho).trace().real();
  return tr * full_rhs(s, model).drho_dt;
}

double log_partition(const Matrix& hamiltonian, double beta) {
  const EigenSystem eig = herm_eig(hamiltonian);
  const double e0 = eig.values(0);
  return -beta * e0 + std::log((-beta * (eig.values.array() - e0)).exp().sum());
}

class Stepper {
 public:
  Stepper(const PreparedModel& model, const IntegratorOptions& opts, IntegratorStats& stats)
      : model_(model), opts_(opts), stats_(stats) {}

  // Advances `state` from t to t_end; returns the pre-renormalization trace drift of the last step.
  double advance(QuantumState& state, double& t, double t_end, double& h) {
    double last_drift = 0.0;
    int retries = 0;
    while (t < t_end) {
      if (stats_.accepted + stats_.error_rejections + stats_.guard_retries > opts_.max_steps)
        throw IntegrationFailure("integrate: step budget exhausted", state, t);
      const bool final_step = t + h >= t_end;
      const double step = final_step ? t_end - t : h;

      Matrix y_new;
      double err = 0.0;
      bool stage_failed = false;
      try {
        std::array<Matrix, 7> k;
        const Matrix& y = state.rho();
        k[0] = rhs_of(y, model_, stats_);
        for (int s = 1; s < 7; ++s) {
          Matrix ys = y;
          for (int j = 0; j < s; ++j)
            if (kA[s][j] != 0.0) ys += step * kA[s][j] * k[j];
          k[s] = rhs_of(ys, model_, stats_);
        }
        y_new = state.rho();
        Matrix e = Matrix::Zero(y.rows(), y.cols());
        for (int s = 0; s < 7; ++s) {
          y_new += step * kB[s] * k[s];
          e += step * (kB[s] - kBStar[s]) * k[s];
        }
        for (Eigen::Index i = 0; i < e.size(); ++i) {
          const double sc = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
          err = std::max(err, std::abs(e(i)) / sc);
        }
      } catch (const DomainError&) {
        stage_failed = true;  // a stage left the positive cone
      }

      if (stage_failed) {
        guard_reject(state, t, h, retries);
        continue;
      }
      if (!(err <= 1.0)) {
        ++stats_.error_rejections;
        h = step * std::max(0.2, 0.9 * std::pow(std::isfinite(err) ? err : 1e10, -0.2));
        continue;
      }

      // Guard: trace drift, then positivity.
      const Matrix herm = hermitize(y_new);
      const double drift = std::abs(herm.trace().real() - 1.0);
      if (drift >= kTraceDriftLimit) {
        guard_reject(state, t, h, retries);
        continue;
      }
      std::optional<QuantumState> next;
      try {
        next.emplace(QuantumState::normalized(herm));
      } catch (const DomainError&) {
      }
      if (!next || next->min_eigenvalue() <= opts_.positivity_floor) {
        guard_reject(state, t, h, retries);
        continue;
      }

      state = std::move(*next);
      t = final_step ? t_end : t + step;
      ++stats_.accepted;
      stats_.max_trace_drift = std::max(stats_.max_trace_drift, drift);
      last_drift = drift;
      retries = 0;

      const double e = std::max(err, 1e-10);
      double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(prev_err_, 0.4 / 5.0);
      factor = std::clamp(factor, 0.2, 5.0);
      prev_err_ = e;
      if (!final_step || step >= h) h = std::min(opts_.max_step, step * factor);
    }
    return last_drift;
  }

 private:
  void guard_reject(const QuantumState& state, double t, double& h, int& retries) {
    ++stats_.guard_retries;
    if (++retries > opts_.max_retries)
      throw IntegrationFailure("integrate: positivity guard exhausted its retries", state, t);
    h *= 0.5;
    // Accepted steps reset `retries`, so a state pinned at the floor would otherwise
    // creep towards the crossing time until t + h == t.
    if (h < kMinRelativeStep * std::max(1.0, std::abs(t)))
      throw IntegrationFailure("integrate: step size underflow at the positivity guard", state, t);
  }

  const PreparedModel& model_;
  const IntegratorOptions& opts_;
  IntegratorStats& stats_;
  double prev_err_ = 1e-4;
};

}  // namespace

void IntegratorOptions::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("integrator tolerances must be positive");
  if (!(initial_step > 0.0) || !(max_step > 0.0)) throw ConfigError("integrator step sizes must be positive");
  if (!(positivity_floor >= 0.0)) throw ConfigError("positivity_floor must be non-negative");
  if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
}

std::vector<double> uniform_samples(double t0, double t1, int count) {
  if (count < 2) return {t0, t1};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = t0 + (t1 - t0) * i / (count - 1);
  out.back() = t1;
  return out;
}

Trajectory integrate(const QuantumState& rho0, const PreparedModel& model, double t0, double t1,
                     const std::vector<double>& sample_times, const IntegratorOptions& opts,
                     bool record_observables) {
  opts.validate();
  if (!(t1 >= t0)) throw InputError("integrate: t_span must be increasing");
  if (rho0.dim() != model.dim()) throw InputError("integrate: state dimension does not match model");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 || sample_times[i] > t1) throw InputError("integrate: sample time outside t_span");
    if (i > 0 && !(sample_times[i] > sample_times[i - 1]))
      throw InputError("integrate: sample times must be strictly increasing");
  }
  if (!(rho0.min_eigenvalue() > opts.positivity_floor))
    throw InputError("integrate: initial state is below the positivity floor");

  Trajectory traj;
  Stepper stepper(model, opts, traj.stats);
  QuantumState state = rho0;
  double t = t0;
  double h = std::min(opts.initial_step, opts.max_step);
  auto record = [&](double drift) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    if (record_observables) {
      ObservableRecord r = entropy_and_flux(state, model);
      r.time = t;
      r.trace_drift = drift;
      traj.observables.push_back(std::move(r));
    }
  };
  for (double ts : sample_times) {
    const double drift = ts > t ? stepper.advance(state, t, ts, h) : 0.0;
    record(drift);
  }
  if (t < t1) stepper.advance(state, t, t1, h);
  return traj;
}

QuantumState evolve(const QuantumState& rho0, const PreparedModel& model, double t0, double t1,
                    const IntegratorOptions& opts, IntegratorStats* stats) {
  Trajectory traj = integrate(rho0, model, t0, t1, {t1}, opts, false);
  if (stats) *stats = traj.stats;
  return traj.states.back();
}

double relative_entropy_to_gibbs(const QuantumState& rho, const Matrix& hamiltonian, double beta) {
  const double energy = (rho.rho() * hamiltonian).trace().real();
  return -rho.von_neumann_entropy() + beta * energy + log_partition(hamiltonian, beta);
}

EntropyProduction entropy_production(const QuantumState& rho, const PreparedModel& model) {
  const RhsReport rhs = full_rhs(rho, model);
  const Matrix log_rho = rho.log();
  EntropyProduction out;
  double flux_sum = 0.0;
  for (std::size_t j = 0; j < model.bath_count(); ++j) {
    const Matrix ds = delta_s(rho, model.beta(j), model.hamiltonian());
    const double s = (ds * rhs.dissipative[j]).trace().real();
    out.per_bath.push_back(s);
    out.total += s;
    const double f = -model.beta(j) * (rhs.dissipative[j] * model.hamiltonian()).trace().real();
    out.flux.push_back(f);
    flux_sum += f;
  }
  out.entropy_rate = -(rhs.drho_dt * log_rho).trace().real();
  out.balance_gap = std::abs(out.total - (out.entropy_rate + flux_sum));
  return out;
}

ObservableRecord entropy_and_flux(const QuantumState& rho, const PreparedModel& model) {
  const EntropyProduction ep = entropy_production(rho, model);
  ObservableRecord r;
  r.energy = (rho.rho() * model.hamiltonian()).trace().real();
  r.entropy = rho.von_neumann_entropy();
  r.sigma = ep.per_bath;
  r.sigma_total = ep.total;
  r.flux = ep.flux;
  r.rel_entropy_to_gibbs = relative_entropy_to_gibbs(rho, model.hamiltonian(), model.beta(0));
  r.min_eig = rho.min_eigenvalue();
  r.trace_drift = std::abs(rho.rho().trace().real() - 1.0);
  return r;
}

Superoperator numerical_rhs_jacobian(const PreparedModel& model, const QuantumState& rho) {
  const double h = std::min(1e-6 * max_norm(rho.rho()), 0.1 * rho.min_eigenvalue());
  IntegratorStats scratch;
  auto directional = [&](const Matrix& dir) -> Matrix {
    if (max_norm(dir) == 0.0) return Matrix::Zero(dir.rows(), dir.cols());
    return (rhs_of(rho.rho() + h * dir, model, scratch) - rhs_of(rho.rho() - h * dir, model, scratch)) / (2.0 * h);
  };
  auto map = [&](const Matrix& delta) -> Matrix {
    const Matrix re = hermitize(delta);
    const Matrix im = hermitize(-kI * delta);  // delta = re + i im
    return directional(re) + kI * directional(im);
  };
  return superop_from_map(map, model.dim(), false);
}

SteadyStateResult steady_state(const PreparedModel& model, const SteadyStateOptions& opts,
                               std::optional<QuantumState> initial) {
  SteadyStateResult res{initial.value_or(QuantumState::maximally_mixed(model.dim()))};
  res.ergodic = model.ergodic();
  if (!res.ergodic) res.warning = "coupling is not ergodic; the steady state may not be unique";
  const Eigen::Index d = model.dim();

  auto residual = [&](const QuantumState& s) { return max_norm(full_rhs(s, model).drho_dt); };

  double r = residual(res.state);
  res.residual_history.push_back(r);
  while (r > opts.switch_tolerance && res.integration_time < opts.max_time) {
    const double t0 = res.integration_time;
    res.state = evolve(res.state, model, t0, t0 + opts.chunk, opts.integrator);
    res.integration_time += opts.chunk;
    r = residual(res.state);
    res.residual_history.push_back(r);
  }

  // Newton on F(rho) = 0 with tr(rho) = 1 appended as an extra equation.
  double step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_newton; ++it) {
    if (r < opts.rhs_tolerance && step < opts.step_tolerance) break;
    const Superoperator jac = numerical_rhs_jacobian(model, res.state);
    Matrix a(d * d + 1, d * d);
    a.topRows(d * d) = jac.matrix();
    a.row(d * d) = vectorize(Matrix::Identity(d, d)).transpose();
    Vector b(d * d + 1);
    b.head(d * d) = -vectorize(full_rhs(res.state, model).drho_dt);
    b(d * d) = 1.0 - res.state.rho().trace().real();
    const Matrix delta = hermitize(unvectorize(a.colPivHouseholderQr().solve(b), d));

    double damping = 1.0;
    std::optional<QuantumState> next;
    for (int k = 0; k < 20 && !next; ++k, damping *= 0.5) {
      try {
        QuantumState cand = QuantumState::normalized(res.state.rho() + damping * delta);
        if (cand.min_eigenvalue() > opts.integrator.positivity_floor) next.emplace(std::move(cand));
      } catch (const DomainError&) {
      }
    }
    if (!next) break;
    step = trace_distance(next->rho(), res.state.rho());
    res.state = std::move(*next);
    r = residual(res.state);
    res.residual_history.push_back(r);
    res.newton_iterations = it + 1;
  }
  res.rhs_residual = r;
  res.last_newton_step = step;
  res.converged = r < opts.rhs_tolerance && step < opts.step_tolerance;
  return res;
}

SystemModel ancilla_extend(const SystemModel& model, const Matrix& ancilla_hamiltonian,
                           const Matrix& ancilla_coupling, Eigen::Index max_dim) {
  const Eigen::Index d = model.dim();
  const Eigen::Index da = ancilla_hamiltonian.rows();
  if (ancilla_hamiltonian.cols() != da || ancilla_coupling.rows() != da || ancilla_coupling.cols() != da)
    throw ConfigError("ancilla_extend: ancilla operators must be square and of equal dimension");
  if (d * da > max_dim)
    throw ConfigError("ancilla_extend: extended dimension " + std::to_string(d * da) + " exceeds limit " +
                      std::to_string(max_dim));
  const Matrix id_s = Matrix::Identity(d, d);
  const Matrix id_a = Matrix::Identity(da, da);
  SystemModel out = model;
  out.hamiltonian = kron(model.hamiltonian, id_a) + kron(id_s, ancilla_hamiltonian);
  for (auto& b : out.baths) b.coupling = kron(b.coupling, id_a) + kron(id_s, ancilla_coupling);
  return out;
}

}  // namespace mds
