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

#include <doctest.h>

#include <cmath>

#include "mdslab/dynamics.hpp"
#include "support.hpp"

using namespace mds;
using namespace mds::test;

namespace {

BathSpec ohmic_bath(double beta, double strength, Matrix coupling, CouplingScheme scheme = CouplingScheme::davies()) {
  return BathSpec{beta, SpectralFunction::ohmic(strength, 5.0), std::move(coupling), scheme};
}

}  // namespace

TEST_CASE("integrate: zero coupling is isospectral") {
  std::mt19937_64 rng(31);
  const Matrix h = diag({0.0, 1.0, 2.5});
  const PreparedModel pm(SystemModel{h, {ohmic_bath(1.0, 0.2, Matrix::Zero(3, 3))}}, false);
  const QuantumState rho0 = random_state(rng, 3);
  const Trajectory tr = integrate(rho0, pm, 0.0, 5.0, uniform_samples(0.0, 5.0, 11), {}, false);
  const Eigen::VectorXd ev0 = rho0.eig().values;
  for (const auto& s : tr.states) CHECK((s.eig().values - ev0).cwiseAbs().maxCoeff() <= 1e-9);
  // Off-diagonal phases rotate at the Bohr frequencies.
  const cplx expect = rho0.rho()(0, 1) * std::exp(cplx(0.0, 5.0));
  CHECK(std::abs(tr.states.back().rho()(0, 1) - expect) < 1e-8);
}

TEST_CASE("integrate: qubit Davies populations follow the rate equation") {
  const double beta = 1.0;
  const SpectralFunction spec = SpectralFunction::ohmic(0.2, 5.0);
  const PreparedModel pm(SystemModel{diag({0.0, 1.0}), {BathSpec{beta, spec, sigma_x(), CouplingScheme::davies()}}});
  const double down = spec(1.0, beta), up = spec(-1.0, beta);
  const double gamma = down + up;
  const double p1_eq = up / gamma;
  const double p1_0 = 0.01;

  const double t1 = 50.0 / gamma;
  const auto samples = uniform_samples(0.0, t1, 26);
  const Trajectory tr = integrate(QuantumState(diag({0.99, 0.01})), pm, 0.0, t1, samples);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double oracle = p1_eq + (p1_0 - p1_eq) * std::exp(-gamma * samples[k]);
    CHECK(std::abs(std::real(tr.states[k].rho()(1, 1)) - oracle) < 1e-8);
  }
  CHECK(trace_distance(tr.states.back().rho(), gibbs_state(diag({0.0, 1.0}), beta).rho()) < 1e-8);
}

TEST_CASE("integrate: the Gibbs state is stationary for every scheme") {
  const Matrix h = diag({0.0, 1.0, 2.5});
  std::mt19937_64 rng(32);
  for (const auto& scheme : {CouplingScheme::davies(), CouplingScheme::gaussian(2.0), CouplingScheme::single_q()}) {
    const PreparedModel pm(SystemModel{h, {ohmic_bath(1.0, 0.2, random_hermitian(rng, 3), scheme)}});
    const QuantumState g = gibbs_state(h, 1.0);
    const Trajectory tr = integrate(g, pm, 0.0, 10.0, uniform_samples(0.0, 10.0, 6), {}, false);
    for (const auto& s : tr.states) CHECK(max_norm(s.rho() - g.rho()) <= 1e-8);
  }
}

TEST_CASE("integrate: invariants and monotone relative entropy along single-bath trajectories") {
  const Matrix h = diag({0.0, 1.0, 2.5});
  std::mt19937_64 rng(33);
  for (const auto& scheme : {CouplingScheme::davies(), CouplingScheme::gaussian(2.0), CouplingScheme::single_q()}) {
    const PreparedModel pm(SystemModel{h, {ohmic_bath(1.0, 0.3, random_hermitian(rng, 3), scheme)}});
    const Trajectory tr = integrate(random_state(rng, 3, 1e-3), pm, 0.0, 20.0, uniform_samples(0.0, 20.0, 41));
    CHECK(tr.stats.max_trace_drift < 1e-8);
    for (std::size_t k = 0; k < tr.observables.size(); ++k) {
      const auto& o = tr.observables[k];
      CHECK(o.sigma_total >= -1e-10);
      CHECK(o.min_eig > IntegratorOptions{}.positivity_floor);
      CHECK(o.rel_entropy_to_gibbs >= -1e-12);
      if (k > 0) CHECK(o.rel_entropy_to_gibbs <= tr.observables[k - 1].rel_entropy_to_gibbs + 1e-9);
      if (k > 0) CHECK(tr.times[k] > tr.times[k - 1]);
    }
  }
}

TEST_CASE("entropy production: sign, zero at equilibrium, balance against finite differences") {
  const Matrix h = diag({0.0, 1.0, 2.5});
  std::mt19937_64 rng(34);
  const PreparedModel pm(SystemModel{h,
                                     {ohmic_bath(1.0, 0.2, random_hermitian(rng, 3)),
                                      ohmic_bath(0.5, 0.1, random_hermitian(rng, 3), CouplingScheme::gaussian(2.0))}});
  for (int k = 0; k < 20; ++k) {
    const EntropyProduction ep = entropy_production(random_state(rng, 3, 1e-4), pm);
    for (double s : ep.per_bath) CHECK(s >= -1e-12);
    CHECK(ep.balance_gap <= 1e-9 * (1.0 + std::abs(ep.total)));
  }
  const PreparedModel single(SystemModel{h, {ohmic_bath(1.0, 0.2, random_hermitian(rng, 3))}});
  const QuantumState g = gibbs_state(h, 1.0);
  CHECK(std::abs(entropy_production(g, single).total) < 1e-14);
  for (double j : entropy_and_flux(g, single).flux) CHECK(std::abs(j) < 1e-14);

  // dS/dt by central differences of the entropy along the flow, centred at t = dt.
  const QuantumState rho0 = random_state(rng, 3, 1e-2);
  const double dt = 1e-4;
  IntegratorOptions tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-15;
  const QuantumState rho = evolve(rho0, pm, 0.0, dt, tight);
  const double s_plus = evolve(rho, pm, dt, 2.0 * dt, tight).von_neumann_entropy();
  const double ds_dt = (s_plus - rho0.von_neumann_entropy()) / (2.0 * dt);
  const EntropyProduction ep = entropy_production(rho, pm);
  double flux = 0.0;
  for (double j : ep.flux) flux += j;
  CHECK(std::abs(ep.total - (ds_dt + flux)) / std::abs(ep.total) < 1e-6);
}

TEST_CASE("entropy_and_flux: maximally mixed qubit") {
  const PreparedModel pm(SystemModel{diag({0.0, 1.0}), {ohmic_bath(1.0, 0.2, sigma_x())}});
  CHECK(entropy_and_flux(QuantumState::maximally_mixed(2), pm).entropy ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(relative_entropy_to_gibbs(gibbs_state(diag({0.0, 1.0}), 1.0), diag({0.0, 1.0}), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("integrate: halving tolerances moves the terminal state by less than ten tolerances") {
  const Matrix h = diag({0.0, 1.0, 2.5});
  std::mt19937_64 rng(35);
  const PreparedModel pm(SystemModel{h, {ohmic_bath(1.0, 0.3, random_hermitian(rng, 3), CouplingScheme::single_q())}});
  const QuantumState rho0 = random_state(rng, 3, 1e-2);
  IntegratorOptions coarse;
  coarse.rel_tol = 1e-8;
  coarse.abs_tol = 1e-10;
  IntegratorOptions fine = coarse;
  fine.rel_tol /= 2.0;
  fine.abs_tol /= 2.0;
  const QuantumState a = evolve(rho0, pm, 0.0, 10.0, coarse);
  const QuantumState b = evolve(rho0, pm, 0.0, 10.0, fine);
  CHECK(max_norm(a.rho() - b.rho()) < 10.0 * coarse.rel_tol);
}

TEST_CASE("steady_state: single bath gives the Gibbs state for every scheme") {
  const Matrix h = diag({0.0, 1.0, 2.5});
  std::mt19937_64 rng(36);
  for (const auto& scheme : {CouplingScheme::davies(), CouplingScheme::gaussian(2.0), CouplingScheme::single_q()}) {
    const PreparedModel pm(SystemModel{h, {ohmic_bath(1.0, 0.2, random_hermitian(rng, 3), scheme)}});
    const SteadyStateResult r = steady_state(pm, {}, random_state(rng, 3));
    CHECK(r.converged);
    CHECK(r.rhs_residual < 1e-11);
    CHECK(trace_distance(r.state.rho(), gibbs_state(h, 1.0).rho()) < 1e-8);
  }
}

TEST_CASE("steady_state: two baths at one temperature match the single-bath answer") {
  const Matrix h = diag({0.0, 1.0, 2.5});
  std::mt19937_64 rng(37);
  const PreparedModel pm(SystemModel{h, {ohmic_bath(0.7, 0.2, random_hermitian(rng, 3)),
                                         ohmic_bath(0.7, 0.1, random_hermitian(rng, 3))}});
  const SteadyStateResult r = steady_state(pm);
  CHECK(r.converged);
  CHECK(trace_distance(r.state.rho(), gibbs_state(h, 0.7).rho()) < 1e-8);
}

TEST_CASE("steady_state: two-temperature qubit matches the summed rate equation") {
  const double e = 1.0, b1 = 1.0, b2 = 1.2;
  const SpectralFunction s1 = SpectralFunction::ohmic(0.2, 5.0);
  const SpectralFunction s2 = SpectralFunction::ohmic(0.1, 5.0);
  const PreparedModel pm(SystemModel{diag({0.0, e}), {BathSpec{b1, s1, sigma_x(), CouplingScheme::davies()},
                                                      BathSpec{b2, s2, sigma_x(), CouplingScheme::davies()}}});
  const SteadyStateResult r = steady_state(pm);
  CHECK(r.converged);
  const double ratio_oracle = (s1(-e, b1) + s2(-e, b2)) / (s1(e, b1) + s2(e, b2));
  const Matrix& rho = r.state.rho();
  CHECK(std::abs(rho(0, 1)) < 1e-10);
  const double ratio = std::real(rho(1, 1)) / std::real(rho(0, 0));
  CHECK(ratio == doctest::Approx(ratio_oracle).epsilon(1e-9));
  CHECK(ratio < std::exp(-b1 * e));
  CHECK(ratio > std::exp(-b2 * e));
}

TEST_CASE("integrate: positivity guard failure carries the last good state") {
  IntegratorOptions opts;
  opts.positivity_floor = 0.3;
  const PreparedModel pm(SystemModel{diag({0.0, 1.0}), {ohmic_bath(1.0, 0.5, sigma_x())}});
  try {
    integrate(QuantumState(diag({0.6, 0.4})), pm, 0.0, 50.0, uniform_samples(0.0, 50.0, 11), opts);
    FAIL("expected IntegrationFailure");
  } catch (const IntegrationFailure& f) {
    CHECK(f.time() > 0.0);
    CHECK(f.last_good_state().min_eigenvalue() > 0.3);
  }
  IntegratorOptions bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("ancilla_extend: uncoupled ancilla leaves the reduced dynamics unchanged") {
  const Matrix h = diag({0.0, 1.0});
  const SystemModel base{h, {ohmic_bath(1.0, 0.3, sigma_x())}};
  const Matrix h_anc = diag({0.0, 0.7});
  const SystemModel ext = ancilla_extend(base, h_anc, Matrix::Zero(2, 2));
  CHECK(ext.dim() == 4);
  const PreparedModel pm_base(base);
  const PreparedModel pm_ext(ext, false);

  std::mt19937_64 rng(38);
  const QuantumState s0 = random_state(rng, 2, 1e-2);
  const QuantumState a0 = random_state(rng, 2, 1e-2);
  const QuantumState joint(kron(s0.rho(), a0.rho()));
  const auto samples = uniform_samples(0.0, 5.0, 6);
  const Trajectory tb = integrate(s0, pm_base, 0.0, 5.0, samples, {}, false);
  const Trajectory te = integrate(joint, pm_ext, 0.0, 5.0, samples, {}, false);
  for (std::size_t k = 0; k < samples.size(); ++k)
    CHECK(max_norm(partial_trace_second(te.states[k].rho(), 2, 2) - tb.states[k].rho()) < 1e-8);
}

TEST_CASE("ancilla_extend: product Gibbs state stationary, random product state stays positive") {
  const Matrix h = diag({0.0, 1.0});
  const Matrix h_anc = diag({0.0, 0.7});
  const SystemModel ext = ancilla_extend(SystemModel{h, {ohmic_bath(1.0, 0.3, sigma_x())}}, h_anc, 0.5 * sigma_x());
  const PreparedModel pm(ext);
  const QuantumState g(kron(gibbs_state(h, 1.0).rho(), gibbs_state(h_anc, 1.0).rho()));
  CHECK(max_norm(full_rhs(g, pm).drho_dt) < 1e-12);

  std::mt19937_64 rng(39);
  const QuantumState joint(kron(random_state(rng, 2, 1e-2).rho(), random_state(rng, 2, 1e-2).rho()));
  const Trajectory tr = integrate(joint, pm, 0.0, 10.0, uniform_samples(0.0, 10.0, 21));
  CHECK(tr.stats.guard_retries <= 5);
  for (const auto& o : tr.observables) CHECK(o.min_eig > 0.0);

  CHECK_THROWS(ancilla_extend(SystemModel{Matrix::Zero(5, 5), {}}, Matrix::Zero(4, 4), Matrix::Zero(4, 4)));
}
