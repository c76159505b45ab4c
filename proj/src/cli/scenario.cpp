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

#include "mdslab/cli/scenario.hpp"

#include <chrono>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mdslab/cli/output.hpp"
#include "mdslab/cli/parallel.hpp"
#include "mdslab/cli/verify.hpp"
#include "mdslab/linres.hpp"

namespace mds::cli {

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"simulate", "steady", "onsager", "spectrum", "verify"};
  return names;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Json model_json(const ScenarioConfig& cfg) {
  Json m;
  m["dim"] = cfg.model.dim();
  m["hamiltonian"] = matrix_json(cfg.model.hamiltonian);
  Json baths = Json::array();
  for (const auto& b : cfg.model.baths) {
    Json j;
    j["beta"] = b.beta;
    j["scheme"] = to_string(b.scheme.kind);
    if (b.scheme.kind == CouplingScheme::Kind::gaussian) j["collision_time"] = b.scheme.collision_time;
    baths.push_back(j);
  }
  m["baths"] = baths;
  m["seed"] = cfg.seed;
  return m;
}

Json stats_json(const IntegratorStats& s) {
  Json j;
  j["accepted_steps"] = s.accepted;
  j["error_rejections"] = s.error_rejections;
  j["guard_retries"] = s.guard_retries;
  j["rhs_evaluations"] = s.rhs_evaluations;
  j["max_trace_drift"] = number_json(s.max_trace_drift);
  return j;
}

Json vector_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number_json(x));
  return out;
}

Json observables_json(const ObservableRecord& o) {
  Json j;
  j["time"] = o.time;
  j["energy"] = number_json(o.energy);
  j["entropy"] = number_json(o.entropy);
  j["sigma_total"] = number_json(o.sigma_total);
  j["sigma"] = vector_json(o.sigma);
  j["flux"] = vector_json(o.flux);
  j["rel_entropy_to_gibbs"] = number_json(o.rel_entropy_to_gibbs);
  j["min_eig"] = number_json(o.min_eig);
  j["trace_drift"] = number_json(o.trace_drift);
  return j;
}

Json onsager_json(const OnsagerResult& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["L"] = real_matrix_json(r.L);
  if (r.correlation.size() > 0) j["correlation"] = real_matrix_json(r.correlation);
  j["symmetry_residual"] = number_json(r.symmetry_residual);
  j["min_symmetric_eigenvalue"] = number_json(r.min_symmetric_eigenvalue);
  if (r.method == OnsagerResult::Method::green_kubo) {
    j["kernel_rank"] = r.kernel_rank;
    j["spectral_gap"] = number_json(r.spectral_gap);
    j["solve_residual"] = number_json(r.solve_residual);
  } else {
    j["sum_rule_residual"] = number_json(r.sum_rule_residual);
    j["steady_residuals"] = vector_json(r.steady_residuals);
  }
  return j;
}

int dump_failure(const IntegrationFailure& e, const std::filesystem::path& dir, std::ostream& log) {
  const auto path = dir / "last_good_state.json";
  Json j;
  j["message"] = e.what();
  j["time"] = e.time();
  j["state"] = matrix_json(e.last_good_state().rho());
  write_json(path, "last_good_state", std::move(j));
  fmt::print(log, "numeric failure: {}\nlast good state (t = {:.9g}) written to {}\n", e.what(), e.time(),
             path.string());
  return kExitNumericFailure;
}

int run_simulate(const ScenarioConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  const PreparedModel pm(cfg.model);
  const QuantumState rho0 = make_initial_state(cfg);
  const auto samples = uniform_samples(cfg.run.t0, cfg.run.t1, cfg.run.samples);
  const auto t0 = Clock::now();
  const Trajectory traj = integrate(rho0, pm, cfg.run.t0, cfg.run.t1, samples, cfg.run.integrator);
  const double wall = seconds_since(t0);
  write_trajectory_csv(dir / "trajectory.csv", traj, cfg.model.baths.size(), cfg.output.stride,
                       cfg.output.write_state);
  Json s;
  s["command"] = "simulate";
  s["model"] = model_json(cfg);
  s["t_span"] = Json::array({cfg.run.t0, cfg.run.t1});
  s["samples"] = cfg.run.samples;
  s["final_state"] = matrix_json(traj.states.back().rho());
  s["final_observables"] = observables_json(traj.observables.back());
  s["integrator"] = stats_json(traj.stats);
  s["ergodic"] = pm.ergodic();
  write_json(dir / "summary.json", "summary", std::move(s));
  const ObservableRecord& last = traj.observables.back();
  fmt::print(log, "simulate: t = {:.6g}, energy {:.9g}, entropy {:.9g}, relative entropy to Gibbs {:.3e}\n",
             last.time, last.energy, last.entropy, last.rel_entropy_to_gibbs);
  fmt::print(log, "  {} steps, {} error rejections, {} guard retries, {} RHS evaluations, {:.2f} s\n",
             traj.stats.accepted, traj.stats.error_rejections, traj.stats.guard_retries, traj.stats.rhs_evaluations,
             wall);
  fmt::print(log, "  wrote {} and {}\n", (dir / "trajectory.csv").string(), (dir / "summary.json").string());
  return kExitOk;
}

int run_steady(const ScenarioConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  const PreparedModel pm(cfg.model);
  const auto t0 = Clock::now();
  const SteadyStateResult ss = steady_state(pm, cfg.run.steady, make_initial_state(cfg));
  const double wall = seconds_since(t0);
  const EntropyProduction ep = entropy_production(ss.state, pm);
  Json s;
  s["command"] = "steady";
  s["model"] = model_json(cfg);
  s["converged"] = ss.converged;
  s["state"] = matrix_json(ss.state.rho());
  s["rhs_residual"] = number_json(ss.rhs_residual);
  s["last_newton_step"] = number_json(ss.last_newton_step);
  s["newton_iterations"] = ss.newton_iterations;
  s["integration_time"] = ss.integration_time;
  s["residual_history"] = vector_json(ss.residual_history);
  s["energy_flux"] = vector_json(steady_fluxes(ss.state, pm));
  s["entropy_production"] = vector_json(ep.per_bath);
  s["entropy_production_total"] = number_json(ep.total);
  s["trace_distance_to_gibbs"] =
      number_json(trace_distance(ss.state.rho(), gibbs_state(pm.hamiltonian(), cfg.reference_beta()).rho()));
  s["ergodic"] = ss.ergodic;
  s["warning"] = ss.warning;
  write_json(dir / "steady.json", "steady", std::move(s));
  fmt::print(log, "steady: {} after {} Newton iterations (integrated to t = {:.6g}), residual {:.3e}, {:.2f} s\n",
             ss.converged ? "converged" : "NOT converged", ss.newton_iterations, ss.integration_time,
             ss.rhs_residual, wall);
  if (!ss.warning.empty()) fmt::print(log, "  warning: {}\n", ss.warning);
  fmt::print(log, "  wrote {}\n", (dir / "steady.json").string());
  return ss.converged ? kExitOk : kExitNumericFailure;
}

int run_onsager(const ScenarioConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  const double beta = cfg.run.onsager.beta.value_or(cfg.reference_beta());
  const double dx = cfg.run.onsager.dx;
  const OnsagerResult gk = onsager_green_kubo(cfg.model, beta);
  const OnsagerResult fd = onsager_finite_difference(cfg.model, beta, dx, cfg.run.steady);
  const OnsagerResult fd_half = onsager_finite_difference(cfg.model, beta, 0.5 * dx, cfg.run.steady);
  const double scale = gk.L.cwiseAbs().maxCoeff();
  auto gap = [&](const OnsagerResult& r) {
    return scale > 0.0 ? (r.L - gk.L).cwiseAbs().maxCoeff() / scale : (r.L - gk.L).cwiseAbs().maxCoeff();
  };
  Json s;
  s["command"] = "onsager";
  s["model"] = model_json(cfg);
  s["beta"] = beta;
  s["dx"] = dx;
  s["green_kubo"] = onsager_json(gk);
  s["finite_difference"] = onsager_json(fd);
  s["finite_difference_half_step"] = onsager_json(fd_half);
  s["relative_gap"] = number_json(gap(fd));
  s["relative_gap_half_step"] = number_json(gap(fd_half));
  write_json(dir / "onsager.json", "onsager", std::move(s));
  fmt::print(log, "onsager at beta = {:.6g}: symmetry residual {:.3e}, min eigenvalue of symmetric part {:.3e}\n",
             beta, gk.symmetry_residual, gk.min_symmetric_eigenvalue);
  fmt::print(log, "  Green-Kubo vs finite difference: {:.3e} at dX = {:.3g}, {:.3e} at dX/2\n", gap(fd), dx,
             gap(fd_half));
  fmt::print(log, "  wrote {}\n", (dir / "onsager.json").string());
  return kExitOk;
}

int run_spectrum(const ScenarioConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  const double beta = cfg.run.onsager.beta.value_or(cfg.reference_beta());
  const LinearizedGenerator gen = linearized_generator(cfg.model, beta);
  const SpectrumReport sp = generator_spectrum(gen);
  const DetailedBalanceReport db = detailed_balance(gen);
  Json s;
  s["command"] = "spectrum";
  s["model"] = model_json(cfg);
  s["beta"] = beta;
  s["eigenvalues"] = complex_list_json(sp.eigenvalues);
  s["zero_count"] = sp.zero_count;
  s["positive_real_count"] = sp.positive_real_count;
  s["spectral_gap"] = number_json(sp.spectral_gap);
  s["zero_mode_distance"] = number_json(sp.zero_mode_distance);
  Json dbj;
  dbj["residual"] = number_json(db.residual);
  dbj["dissipative"] = number_json(db.dissipative);
  dbj["hamiltonian_reversal"] = number_json(db.hamiltonian_reversal);
  dbj["without_reversal"] = number_json(db.literal);
  s["detailed_balance"] = dbj;
  s["ergodic"] = gen.ergodic;
  write_json(dir / "spectrum.json", "spectrum", std::move(s));
  fmt::print(log, "spectrum at beta = {:.6g}: {} zero eigenvalue(s), {} with positive real part, gap {:.6g}\n", beta,
             sp.zero_count, sp.positive_real_count, sp.spectral_gap);
  fmt::print(log, "  detailed balance residual {:.3e}\n", db.residual);
  if (!gen.ergodic) fmt::print(log, "  warning: {}\n", gen.warning);
  fmt::print(log, "  wrote {}\n", (dir / "spectrum.json").string());
  return kExitOk;
}

int run_verify(const ScenarioConfig& cfg, const std::filesystem::path& dir, int threads, std::ostream& log) {
  const VerifyContext ctx = VerifyContext::from_config(cfg, threads);
  const auto t0 = Clock::now();
  const std::vector<CheckResult> results = verify_battery(ctx);
  const double wall = seconds_since(t0);
  bool all = true;
  Json checks = Json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    Json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["skipped"] = r.skipped;
    j["measured"] = number_json(r.measured);
    j["tolerance"] = number_json(r.tolerance);
    j["detail"] = r.detail;
    checks.push_back(j);
    fmt::print(log, "{} {:<26} measured {:<11.3e} tolerance {:.1e}  {}\n",
               r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL"), r.name, r.measured, r.tolerance, r.detail);
  }
  Json s;
  s["command"] = "verify";
  s["model"] = model_json(cfg);
  s["all_passed"] = all;
  s["checks"] = checks;
  write_json(dir / "verify.json", "verify", std::move(s));
  fmt::print(log, "verify: {} in {:.1f} s on {} thread(s); wrote {}\n", all ? "all checks passed" : "FAILED", wall,
             ctx.threads, (dir / "verify.json").string());
  return all ? kExitOk : kExitCheckFailure;
}

}  // namespace

int run_scenario(const std::string& command, const ScenarioConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const std::filesystem::path dir = opts.out_dir.value_or(cfg.output.dir);
  std::filesystem::create_directories(dir);
  try {
    if (command == "simulate") return run_simulate(cfg, dir, log);
    if (command == "steady") return run_steady(cfg, dir, log);
    if (command == "onsager") return run_onsager(cfg, dir, log);
    if (command == "spectrum") return run_spectrum(cfg, dir, log);
    if (command == "verify") return run_verify(cfg, dir, resolve_threads(opts.threads), log);
  } catch (const IntegrationFailure& e) {
    return dump_failure(e, dir, log);
  }
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace mds::cli
