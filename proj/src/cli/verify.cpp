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

#include "mdslab/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include <fmt/format.h>

#include "mdslab/cli/parallel.hpp"
#include "mdslab/quadrature.hpp"

namespace mds::cli {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MDSLAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return int(n);
  }
  return int(std::max(1u, std::thread::hardware_concurrency()));
}

VerifyContext VerifyContext::from_config(const ScenarioConfig& cfg, int threads) {
  VerifyContext ctx;
  ctx.model = cfg.model;
  ctx.seed = cfg.seed;
  ctx.beta = cfg.run.onsager.beta.value_or(cfg.reference_beta());
  ctx.energy = cfg.reference_energy();
  ctx.collision_time = 2.0 / ctx.energy;
  for (const auto& b : cfg.model.baths)
    if (b.scheme.kind == CouplingScheme::Kind::gaussian) {
      ctx.collision_time = b.scheme.collision_time;
      break;
    }
  if (cfg.run.verify_collision_time) ctx.collision_time = *cfg.run.verify_collision_time;
  ctx.t_end = cfg.run.t1 - cfg.run.t0;
  ctx.onsager_dx = cfg.run.onsager.dx;
  ctx.quadrature_nodes = cfg.run.quadrature_nodes;
  ctx.integrator = cfg.run.integrator;
  ctx.steady = cfg.run.steady;
  ctx.threads = resolve_threads(threads);
  return ctx;
}

std::mt19937_64 check_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream), 0x6d64u};
  return std::mt19937_64(seq);
}

QuantumState random_state(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  Matrix x(dim, dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cplx(g(rng), g(rng));
  return QuantumState::normalized(x * x.adjoint() + 1e-3 * Matrix::Identity(dim, dim));
}

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  Matrix x(dim, dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cplx(g(rng), g(rng));
  return hermitize(x);
}

SystemModel with_scheme(const SystemModel& model, const CouplingScheme& scheme) {
  SystemModel out = model;
  for (auto& b : out.baths) b.scheme = scheme;
  return out;
}

std::vector<CouplingScheme> all_schemes(double collision_time) {
  return {CouplingScheme::davies(), CouplingScheme::gaussian(collision_time), CouplingScheme::single_q()};
}

namespace {

CheckResult make(const std::string& name, double measured, double tol, bool passed, std::string detail) {
  return {name, passed, false, measured, tol, std::move(detail)};
}

CheckResult skipped(const std::string& name, double tol, std::string why) {
  return {name, true, true, 0.0, tol, std::move(why)};
}

std::string scheme_name(const CouplingScheme& s) { return to_string(s.kind); }

std::string joined(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

}  // namespace

TrajectoryBundle trajectory_bundle(const VerifyContext& ctx, int per_scheme) {
  const auto schemes = all_schemes(ctx.collision_time);
  const std::size_t n = schemes.size() * std::size_t(per_scheme);
  TrajectoryBundle bundle;
  std::vector<std::string> labels(n);
  std::vector<std::optional<Trajectory>> slots(n);
  std::vector<std::string> errors(n);
  parallel_for(n, ctx.threads, [&](std::size_t i) {
    const CouplingScheme& s = schemes[i / std::size_t(per_scheme)];
    labels[i] = fmt::format("{}#{}", scheme_name(s), i % std::size_t(per_scheme));
    auto rng = check_rng(ctx.seed, 1000 + i);
    const PreparedModel pm(with_scheme(ctx.model, s));
    const QuantumState rho0 = random_state(rng, pm.dim());
    try {
      slots[i] = integrate(rho0, pm, 0.0, ctx.t_end, uniform_samples(0.0, ctx.t_end, 41), ctx.integrator);
    } catch (const IntegrationFailure& e) {
      errors[i] = fmt::format("{}: {} at t = {:.6g}", labels[i], e.what(), e.time());
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      bundle.labels.push_back(labels[i]);
      bundle.trajectories.push_back(std::move(*slots[i]));
    }
    if (!errors[i].empty()) bundle.failures.push_back(errors[i]);
  }
  return bundle;
}

CheckResult check_davies_equivalence(const VerifyContext& ctx, int states) {
  const double tol = 1e-9;
  auto rng = check_rng(ctx.seed, 1);
  const Matrix& h = ctx.model.hamiltonian;
  double worst = 0.0;
  for (const auto& bath : ctx.model.baths) {
    BathSpec b = bath;
    b.scheme = CouplingScheme::davies();
    const CouplingFamily fam = build_coupling_family(b, h);
    for (int k = 0; k < states; ++k) {
      const QuantumState rho = random_state(rng, h.rows());
      worst = std::max(worst, max_norm(mds_dissipator(rho, fam, h) - davies_dissipator(rho, fam)));
    }
  }
  return make("davies_equivalence", worst, tol, worst < tol,
              fmt::format("{} random states per bath, max-norm difference to the Davies dissipator", states));
}

CheckResult check_detailed_balance(const VerifyContext& ctx) {
  const double tol = 1e-9;
  double worst = 0.0;
  std::vector<std::string> detail;
  for (const auto& s : all_schemes(ctx.collision_time)) {
    const LinearizedGenerator gen = linearized_generator(with_scheme(ctx.model, s), ctx.beta);
    const DetailedBalanceReport rep = detailed_balance(gen);
    const double r = std::max(rep.residual, detailed_balance_residual(gen));
    worst = std::max(worst, r);
    detail.push_back(fmt::format("{}: {:.3e} (without the Hamiltonian sign flip: {:.3e})", scheme_name(s), r,
                                 rep.literal));
  }
  return make("detailed_balance", worst, tol, worst < tol, joined(detail));
}

CheckResult check_entropy_production_sign(const VerifyContext& ctx, const TrajectoryBundle& bundle, int states) {
  const double tol = 1e-12;
  const double traj_tol = 1e-10;
  const double balance_tol = 1e-6;
  auto rng = check_rng(ctx.seed, 3);
  double min_sigma = std::numeric_limits<double>::infinity();
  for (const auto& s : all_schemes(ctx.collision_time)) {
    const PreparedModel pm(with_scheme(ctx.model, s));
    for (int k = 0; k < states; ++k) {
      const EntropyProduction ep = entropy_production(random_state(rng, pm.dim()), pm);
      min_sigma = std::min(min_sigma, ep.total);
      for (double x : ep.per_bath) min_sigma = std::min(min_sigma, x);
    }
  }
  double min_traj = std::numeric_limits<double>::infinity();
  double worst_balance = 0.0;
  const auto schemes = all_schemes(ctx.collision_time);
  for (std::size_t i = 0; i < bundle.trajectories.size(); ++i) {
    const std::string& label = bundle.labels[i];
    const auto& scheme = *std::find_if(schemes.begin(), schemes.end(), [&](const CouplingScheme& s) {
      return label.rfind(scheme_name(s) + "#", 0) == 0;
    });
    const PreparedModel pm(with_scheme(ctx.model, scheme));
    for (const auto& rho : bundle.trajectories[i].states) {
      const EntropyProduction ep = entropy_production(rho, pm);
      min_traj = std::min(min_traj, ep.total);
      double scale = std::abs(ep.total) + std::abs(ep.entropy_rate);
      for (double f : ep.flux) scale += std::abs(f);
      if (scale > 0.0) worst_balance = std::max(worst_balance, ep.balance_gap / scale);
    }
  }
  const bool ok = min_sigma >= -tol && min_traj >= -traj_tol && worst_balance <= balance_tol &&
                  bundle.failures.empty();
  return make("entropy_production_sign", min_sigma, tol, ok,
              fmt::format("min sigma over {} random states per scheme {:.3e} (must be >= -tolerance); along {} trajectories min sigma "
                          "{:.3e}, max relative balance gap {:.3e}{}",
                          states, min_sigma, bundle.trajectories.size(), min_traj, worst_balance,
                          bundle.failures.empty() ? "" : "; integration failures present"));
}

CheckResult check_gibbs_steady_state(const VerifyContext& ctx, int starts) {
  const double tol = 1e-8;
  const double newton_tol = 1e-11;
  const BathSpec& first = ctx.model.baths.front();
  const auto schemes = all_schemes(ctx.collision_time);
  const std::size_t n = schemes.size() * std::size_t(starts);
  std::vector<double> distance(n), residual(n);
  std::vector<char> converged(n);
  parallel_for(n, std::max(1, ctx.threads / 2), [&](std::size_t i) {
    BathSpec b = first;
    b.scheme = schemes[i / std::size_t(starts)];
    const PreparedModel pm(SystemModel{ctx.model.hamiltonian, {b}});
    auto rng = check_rng(ctx.seed, 4000 + i);
    const SteadyStateResult ss = steady_state(pm, ctx.steady, random_state(rng, pm.dim()));
    distance[i] = trace_distance(ss.state.rho(), gibbs_state(pm.hamiltonian(), b.beta).rho());
    residual[i] = ss.rhs_residual;
    converged[i] = ss.converged;
  });
  const double worst = *std::max_element(distance.begin(), distance.end());
  const double worst_res = *std::max_element(residual.begin(), residual.end());
  const bool all_conv = std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });
  return make("gibbs_steady_state", worst, tol, all_conv && worst < tol && worst_res < newton_tol,
              fmt::format("single bath, {} starts per scheme; max trace distance {:.3e}, max Newton residual "
                          "{:.3e}{}",
                          starts, worst, worst_res, all_conv ? "" : ", some runs did not converge"));
}

CheckResult check_onsager_symmetry(const VerifyContext& ctx) {
  const double tol = 1e-8;
  if (ctx.model.baths.size() < 2) return skipped("onsager_symmetry", tol, "needs at least two baths");
  const OnsagerResult gk = onsager_green_kubo(ctx.model, ctx.beta);
  return make("onsager_symmetry", gk.symmetry_residual, tol, gk.symmetry_residual < tol,
              "Green-Kubo |L - L^T|_max / |L|_max");
}

CheckResult check_onsager_positivity(const VerifyContext& ctx) {
  const double tol = 1e-9;
  if (ctx.model.baths.size() < 2) return skipped("onsager_positivity", tol, "needs at least two baths");
  const OnsagerResult gk = onsager_green_kubo(ctx.model, ctx.beta);
  return make("onsager_positivity", gk.min_symmetric_eigenvalue, tol, gk.min_symmetric_eigenvalue >= -tol,
              "smallest eigenvalue of (L + L^T)/2, must be >= -tolerance");
}

CheckResult check_onsager_finite_difference(const VerifyContext& ctx) {
  const double tol = 1e-3;
  if (ctx.model.baths.size() < 2) return skipped("onsager_finite_difference", tol, "needs at least two baths");
  const OnsagerResult gk = onsager_green_kubo(ctx.model, ctx.beta);
  const double scale = gk.L.cwiseAbs().maxCoeff();
  auto gap = [&](double dx) {
    const OnsagerResult fd = onsager_finite_difference(ctx.model, ctx.beta, dx, ctx.steady);
    return (fd.L - gk.L).cwiseAbs().maxCoeff() / scale;
  };
  const double g1 = gap(ctx.onsager_dx);
  const double g2 = gap(0.5 * ctx.onsager_dx);
  return make("onsager_finite_difference", g1, tol, g1 < tol && g2 < g1,
              fmt::format("relative gap to Green-Kubo {:.3e} at dX = {:.3g}, {:.3e} at dX/2", g1, ctx.onsager_dx,
                          g2));
}

CheckResult check_positivity_guard_stats(const VerifyContext& ctx, const TrajectoryBundle& bundle) {
  const long max_retries = 5;
  double min_eig = std::numeric_limits<double>::infinity();
  long retries = 0;
  for (const auto& tr : bundle.trajectories) {
    retries += tr.stats.guard_retries;
    for (const auto& o : tr.observables) min_eig = std::min(min_eig, o.min_eig);
  }
  const bool ok = bundle.failures.empty() && retries <= max_retries && min_eig > ctx.integrator.positivity_floor;
  std::string detail = fmt::format("{} trajectories, min eigenvalue {:.3e}, {} guard retries", bundle.trajectories.size(),
                                   min_eig, retries);
  for (const auto& f : bundle.failures) detail += "; " + f;
  return make("positivity_guard_stats", double(retries), double(max_retries), ok, detail);
}

CheckResult check_generator_spectrum(const VerifyContext& ctx) {
  const double tol = 1e-8;
  double worst = 0.0;
  bool ok = true;
  std::vector<std::string> detail;
  for (const auto& s : all_schemes(ctx.collision_time)) {
    const LinearizedGenerator gen = linearized_generator(with_scheme(ctx.model, s), ctx.beta);
    if (!gen.ergodic) {
      detail.push_back(scheme_name(s) + ": not ergodic, skipped");
      continue;
    }
    const SpectrumReport sp = generator_spectrum(gen);
    worst = std::max(worst, sp.zero_mode_distance);
    ok = ok && sp.zero_count == 1 && sp.positive_real_count == 0 && sp.zero_mode_distance < tol;
    detail.push_back(fmt::format("{}: {} zero, {} with Re > 1e-10, gap {:.3e}", scheme_name(s), sp.zero_count,
                                 sp.positive_real_count, sp.spectral_gap));
  }
  return make("generator_spectrum", worst, tol, ok, joined(detail));
}

CheckResult check_linearization_consistency(const VerifyContext& ctx) {
  const double tol = 1e-4;
  auto rng = check_rng(ctx.seed, 10);
  double worst = 0.0;
  for (const auto& s : all_schemes(ctx.collision_time)) {
    const SystemModel m = with_scheme(ctx.model, s).at_common_beta(ctx.beta);
    const PreparedModel pm(m);
    const LinearizedGenerator gen = linearized_generator(m, ctx.beta);
    const Matrix& rb = gen.rho_beta.rho();
    const double eps = std::min(1e-6, 1e-2 * gen.rho_beta.min_eigenvalue());
    for (int k = 0; k < 3; ++k) {
      Matrix delta = random_hermitian(rng, pm.dim());
      delta -= (delta.trace() / double(pm.dim())) * Matrix::Identity(pm.dim(), pm.dim());
      delta /= max_norm(delta);
      const QuantumState up(rb + eps * delta);
      const QuantumState down(rb - eps * delta);
      for (std::size_t j = 0; j < pm.families().size(); ++j) {
        const auto& fam = pm.families()[j];
        const Matrix fd = (mds_dissipator(up, fam, pm.hamiltonian()) - mds_dissipator(down, fam, pm.hamiltonian())) /
                          (2.0 * eps);
        const Matrix lin = gen.dissipative_parts[j].apply(delta);
        worst = std::max(worst, max_norm(fd - lin) / std::max(max_norm(lin), 1e-300));
      }
    }
  }
  return make("linearization_consistency", worst, tol, worst < tol,
              "central difference of the dissipator at rho_beta against the linearized dissipator");
}

CheckResult check_t_limit_convergence(const VerifyContext& ctx) {
  const std::vector<double> ts = {1.0, 2.0, 4.0, 8.0};
  const LinearizedGenerator davies = linearized_generator(with_scheme(ctx.model, CouplingScheme::davies()), ctx.beta);
  std::vector<double> dist(ts.size());
  parallel_for(ts.size(), std::max(1, ctx.threads / 2), [&](std::size_t i) {
    const LinearizedGenerator g =
        linearized_generator(with_scheme(ctx.model, CouplingScheme::gaussian(ts[i] / ctx.energy)), ctx.beta);
    dist[i] = max_norm(g.d_bar.matrix() - davies.d_bar.matrix());
  });
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < dist.size(); ++i) worst_ratio = std::max(worst_ratio, dist[i] / dist[i - 1]);
  std::string detail = "distance to Davies at T*E = 1, 2, 4, 8:";
  for (double d : dist) detail += fmt::format(" {:.3e}", d);
  return make("T_limit_convergence", worst_ratio, 1.0, worst_ratio < 1.0, detail);
}

CheckResult check_ancilla_positivity(const VerifyContext& ctx) {
  const Eigen::Index d = ctx.model.dim();
  const double floor = ctx.integrator.positivity_floor;
  if (2 * d > 16) return skipped("ancilla_positivity", floor, "extended dimension exceeds 16");
  auto rng = check_rng(ctx.seed, 12);
  Matrix ha = Matrix::Zero(2, 2);
  ha(1, 1) = 0.7 * ctx.energy;
  Matrix ra(2, 2);
  ra << 0.0, 0.5, 0.5, 0.0;
  const PreparedModel coupled(ancilla_extend(ctx.model, ha, ra));
  const PreparedModel bare(ancilla_extend(ctx.model, Matrix::Zero(2, 2), Matrix::Zero(2, 2)));
  const PreparedModel system(ctx.model);
  const auto samples = uniform_samples(0.0, ctx.t_end, 21);
  double min_eig = std::numeric_limits<double>::infinity();
  double reduction = 0.0;
  long retries = 0;
  for (int k = 0; k < 2; ++k) {
    const QuantumState s = random_state(rng, d);
    const QuantumState a = random_state(rng, 2);
    const QuantumState joint(kron(s.rho(), a.rho()));
    const Trajectory tc = integrate(joint, coupled, 0.0, ctx.t_end, samples, ctx.integrator);
    const Trajectory tb = integrate(joint, bare, 0.0, ctx.t_end, samples, ctx.integrator, false);
    const Trajectory ts = integrate(s, system, 0.0, ctx.t_end, samples, ctx.integrator, false);
    retries += tc.stats.guard_retries + tb.stats.guard_retries;
    for (const auto& o : tc.observables) min_eig = std::min(min_eig, o.min_eig);
    for (const auto& st : tb.states) min_eig = std::min(min_eig, st.min_eigenvalue());
    for (std::size_t i = 0; i < samples.size(); ++i)
      reduction = std::max(reduction, max_norm(partial_trace_second(tb.states[i].rho(), d, 2) - ts.states[i].rho()));
  }
  return make("ancilla_positivity", min_eig, floor, min_eig > floor && reduction < 1e-8,
              fmt::format("2x2 ancilla: min eigenvalue {:.3e}, {} guard retries; uncoupled ancilla reduces to the "
                          "system dynamics within {:.3e}",
                          min_eig, retries, reduction));
}

Matrix gaussian_window_time_integral(const Matrix& hamiltonian, const Matrix& coupling, double collision_time,
                                     double nu) {
  const EigenSystem eig = herm_eig(hamiltonian);
  const Eigen::Index d = eig.dim();
  const Matrix r = eig.basis.adjoint() * coupling * eig.basis;
  const double t = collision_time;
  const double half = 12.0 * t;
  const double omega = std::abs(nu) + (eig.values.maxCoeff() - eig.values.minCoeff());
  const int panels = int(std::ceil(2.0 * half * std::max(omega, 1.0 / t) / 2.0)) + 8;
  const double amp = std::pow(2.0 * std::numbers::pi * t * t, -0.25);
  Matrix acc = Matrix::Zero(d, d);
  const double width = 2.0 * half / panels;
  for (int p = 0; p < panels; ++p) {
    const QuadratureRule rule = gauss_legendre(20, -half + p * width, -half + (p + 1) * width);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = rule.nodes[k];
      const double env = rule.weights[k] * amp * std::exp(-s * s / (4.0 * t * t));
      for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m)
          acc(m, n) += env * std::exp(kI * (nu + eig.values(m) - eig.values(n)) * s) * r(m, n);
    }
  }
  return eig.basis * acc * eig.basis.adjoint();
}

Matrix krho_quadrature(const QuantumState& rho, const Matrix& a, int nodes) {
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, 1.0);
  Matrix acc = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    acc += rule.weights[k] * rho.power(rule.nodes[k]) * a * rho.power(1.0 - rule.nodes[k]);
  return acc;
}

CheckResult check_oracle_equivalences(const VerifyContext& ctx) {
  auto rng = check_rng(ctx.seed, 13);
  const Matrix& h = ctx.model.hamiltonian;
  const Eigen::Index d = h.rows();
  double primal_dual = 0.0;
  bool converged = true;
  for (const auto& s : all_schemes(ctx.collision_time)) {
    BathSpec b = ctx.model.baths.front();
    b.scheme = s;
    const CouplingFamily fam = build_coupling_family(b, h);
    const QuantumState rho = random_state(rng, d);
    const Matrix ds = delta_s(rho, fam.beta, h);
    const Matrix dis = mds_dissipator(rho, fam, h);
    for (int k = 0; k < 10; ++k) {
      const Matrix f = random_hermitian(rng, d);
      const BracketValue br = modular_bracket(rho, fam, f, ds, ctx.quadrature_nodes);
      converged = converged && br.converged;
      primal_dual = std::max(primal_dual, std::abs((rho.rho() * br.value).trace() - (f * dis).trace()));
    }
  }
  double krho = 0.0;
  for (int k = 0; k < 3; ++k) {
    const QuantumState rho = random_state(rng, d);
    const Matrix a = random_hermitian(rng, d) + kI * random_hermitian(rng, d);
    krho = std::max(krho, max_norm(krho_apply(rho, a) - krho_quadrature(rho, a, 64)));
  }
  double window = 0.0;
  const Matrix& r = ctx.model.baths.front().coupling;
  std::vector<double> nus = {0.0, 0.37 * ctx.energy};
  for (const auto& c : bohr_decompose(h, r)) nus.push_back(c.nu);
  for (double nu : nus)
    window = std::max(window, max_norm(gaussian_window_op(h, r, ctx.collision_time, nu) -
                                       gaussian_window_time_integral(h, r, ctx.collision_time, nu)));
  const bool ok = primal_dual <= 1e-9 && krho <= 1e-10 && window <= 1e-8;
  return make("oracle_equivalences", std::max({primal_dual / 1e-9, krho / 1e-10, window / 1e-8}), 1.0, ok,
              fmt::format("primal-dual {:.3e} (tol 1e-9, quadrature {}), K_rho vs 64-node quadrature {:.3e} "
                          "(tol 1e-10), window operator vs time integral {:.3e} (tol 1e-8)",
                          primal_dual, converged ? "converged" : "not converged", krho, window));
}

std::vector<CheckResult> verify_battery(const VerifyContext& ctx) {
  TrajectoryBundle bundle;
  std::string bundle_error;
  try {
    bundle = trajectory_bundle(ctx);
  } catch (const std::exception& e) {
    bundle_error = e.what();
    bundle.failures.push_back(bundle_error);
  }
  using Check = std::function<CheckResult()>;
  const std::vector<std::pair<std::string, Check>> checks = {
      {"davies_equivalence", [&] { return check_davies_equivalence(ctx); }},
      {"detailed_balance", [&] { return check_detailed_balance(ctx); }},
      {"entropy_production_sign", [&] { return check_entropy_production_sign(ctx, bundle); }},
      {"gibbs_steady_state", [&] { return check_gibbs_steady_state(ctx); }},
      {"onsager_symmetry", [&] { return check_onsager_symmetry(ctx); }},
      {"onsager_positivity", [&] { return check_onsager_positivity(ctx); }},
      {"onsager_finite_difference", [&] { return check_onsager_finite_difference(ctx); }},
      {"positivity_guard_stats", [&] { return check_positivity_guard_stats(ctx, bundle); }},
      {"generator_spectrum", [&] { return check_generator_spectrum(ctx); }},
      {"linearization_consistency", [&] { return check_linearization_consistency(ctx); }},
      {"T_limit_convergence", [&] { return check_t_limit_convergence(ctx); }},
      {"ancilla_positivity", [&] { return check_ancilla_positivity(ctx); }},
      {"oracle_equivalences", [&] { return check_oracle_equivalences(ctx); }},
  };
  std::vector<CheckResult> results(checks.size());
  parallel_for(checks.size(), ctx.threads, [&](std::size_t i) {
    try {
      results[i] = checks[i].second();
    } catch (const std::exception& e) {
      results[i] = {checks[i].first, false, false, std::numeric_limits<double>::quiet_NaN(), 0.0,
                    std::string("check raised: ") + e.what()};
    }
  });
  return results;
}

}  // namespace mds::cli
