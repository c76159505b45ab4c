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

#include "mdslab/linres.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace mds {

Matrix linearized_dissipator_apply(const QuantumState& rho_beta, const CouplingFamily& family,
                                   const Matrix& delta) {
  return -dual_bracket(rho_beta, family, krho_inv_apply(rho_beta, delta));
}

LinearizedGenerator linearized_generator(const SystemModel& model, double beta) {
  const PreparedModel prepared(model.at_common_beta(beta));
  const Matrix& h = prepared.hamiltonian();
  const Eigen::Index d = prepared.dim();
  LinearizedGenerator gen{beta, gibbs_state(h, beta)};
  gen.hamiltonian_part = superop_from_map([&](const Matrix& x) { return Matrix(-kI * commutator(h, x)); }, d);
  gen.dissipative = Superoperator(Matrix::Zero(d * d, d * d), d);
  for (const auto& fam : prepared.families()) {
    gen.dissipative_parts.push_back(superop_from_map(
        [&](const Matrix& x) { return linearized_dissipator_apply(gen.rho_beta, fam, x); }, d));
    gen.dissipative = gen.dissipative + gen.dissipative_parts.back();
  }
  gen.d_bar = gen.hamiltonian_part + gen.dissipative;
  gen.d_bar_star = gen.d_bar.dual();
  gen.ergodic = prepared.ergodic();
  if (!gen.ergodic) gen.warning = "coupling is not ergodic; the zero eigenvalue may be degenerate";
  return gen;
}

DetailedBalanceReport detailed_balance(const LinearizedGenerator& gen) {
  const Superoperator k = krho_superop(gen.rho_beta);
  const Superoperator kinv = krho_inv_superop(gen.rho_beta);
  auto residual = [&](const Superoperator& s, double sign) {
    return max_norm(s.dual().matrix() - sign * (kinv * s * k).matrix());
  };
  DetailedBalanceReport rep;
  rep.dissipative = residual(gen.dissipative, 1.0);
  rep.hamiltonian_reversal = residual(gen.hamiltonian_part, -1.0);
  rep.literal = residual(gen.d_bar, 1.0);
  rep.residual = std::max(rep.dissipative, rep.hamiltonian_reversal);
  for (const auto& part : gen.dissipative_parts) rep.residual = std::max(rep.residual, residual(part, 1.0));
  return rep;
}

double detailed_balance_residual(const LinearizedGenerator& gen) {
  const Superoperator k = krho_superop(gen.rho_beta);
  const Superoperator kinv = krho_inv_superop(gen.rho_beta);
  const Superoperator reversed = gen.dissipative - gen.hamiltonian_part;
  return max_norm(gen.d_bar_star.matrix() - (kinv * reversed * k).matrix());
}

Matrix flux_operator(const LinearizedGenerator& gen, std::size_t bath, const Matrix& hamiltonian) {
  return gen.dissipative_parts.at(bath).dual().apply(hamiltonian);
}

cplx kubo_inner(const Matrix& a, const Matrix& b, const QuantumState& rho) {
  return (a.adjoint() * krho_apply(rho, b)).trace();
}

SpectrumReport generator_spectrum(const LinearizedGenerator& gen) {
  Eigen::ComplexEigenSolver<Matrix> es(gen.d_bar.matrix());
  if (es.info() != Eigen::Success) throw NumericError("generator_spectrum: eigensolver failed");
  const Eigen::Index n = es.eigenvalues().size();
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    const cplx x = es.eigenvalues()(a);
    const cplx y = es.eigenvalues()(b);
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  SpectrumReport rep;
  rep.max_real_nonzero = -std::numeric_limits<double>::infinity();
  Eigen::Index zero_index = order.front();
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i : order) {
    const cplx l = es.eigenvalues()(i);
    rep.eigenvalues.push_back(l);
    if (std::abs(l) < 1e-9)
      ++rep.zero_count;
    else
      rep.max_real_nonzero = std::max(rep.max_real_nonzero, l.real());
    if (l.real() > 1e-10) ++rep.positive_real_count;
    if (std::abs(l) < smallest) {
      smallest = std::abs(l);
      zero_index = i;
    }
  }
  rep.spectral_gap = -rep.max_real_nonzero;
  const Eigen::Index d = gen.d_bar.dim();
  Matrix mode = unvectorize(es.eigenvectors().col(zero_index), d);
  const cplx tr = mode.trace();
  if (std::abs(tr) > 0.0) mode /= tr;
  rep.zero_mode = mode;
  rep.zero_mode_distance = max_norm(mode - gen.rho_beta.rho());
  return rep;
}

std::string to_string(OnsagerResult::Method m) {
  return m == OnsagerResult::Method::green_kubo ? "green_kubo" : "finite_difference";
}

namespace {

void finish_onsager(OnsagerResult& res) {
  const RealMatrix& l = res.L;
  const double scale = l.cwiseAbs().maxCoeff();
  res.symmetry_residual = scale > 0.0 ? (l - l.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
  const RealMatrix sym = 0.5 * (l + l.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym, Eigen::EigenvaluesOnly);
  res.min_symmetric_eigenvalue = es.eigenvalues().minCoeff();
}

}  // namespace

RealMatrix green_kubo_correlation(const LinearizedGenerator& gen, const std::vector<Matrix>& fluxes,
                                  double* solve_residual) {
  const Eigen::Index d = gen.d_bar.dim();
  const Eigen::Index n2 = d * d;
  const Matrix id = Matrix::Identity(d, d);
  // Bordered system [D* 1; rho^T 0]: solves D* X = rhs with tr(rho X) = 0.
  Matrix bordered = Matrix::Zero(n2 + 1, n2 + 1);
  bordered.topLeftCorner(n2, n2) = gen.d_bar_star.matrix();
  bordered.block(0, n2, n2, 1) = vectorize(id);
  bordered.block(n2, 0, 1, n2) = vectorize(gen.rho_beta.rho().transpose()).transpose();
  const Eigen::PartialPivLU<Matrix> lu(bordered);

  const std::size_t n = fluxes.size();
  std::vector<Matrix> responses;
  double worst = 0.0;
  for (const Matrix& flux : fluxes) {
    const Matrix projected = flux - (gen.rho_beta.rho() * flux).trace() * id;
    Vector rhs = Vector::Zero(n2 + 1);
    rhs.head(n2) = -vectorize(projected);
    const Vector sol = lu.solve(rhs);
    worst = std::max(worst, (bordered * sol - rhs).cwiseAbs().maxCoeff());
    responses.push_back(unvectorize(sol.head(n2), d));
  }
  if (solve_residual) *solve_residual = worst;
  RealMatrix g(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) g(j, k) = kubo_inner(responses[j], fluxes[k], gen.rho_beta).real();
  return g;
}

OnsagerResult onsager_green_kubo(const SystemModel& model, double beta) {
  const LinearizedGenerator gen = linearized_generator(model, beta);
  const SpectrumReport spec = generator_spectrum(gen);
  OnsagerResult res;
  res.method = OnsagerResult::Method::green_kubo;
  res.kernel_rank = spec.zero_count;
  res.spectral_gap = spec.spectral_gap;
  if (spec.zero_count != 1 || !(spec.spectral_gap > 1e-10))
    throw NumericError("onsager_green_kubo: generator kernel is degenerate or the spectral gap vanishes (gap " +
                       std::to_string(spec.spectral_gap) + ", kernel rank " + std::to_string(spec.zero_count) + ")");

  std::vector<Matrix> fluxes;
  for (std::size_t j = 0; j < gen.dissipative_parts.size(); ++j)
    fluxes.push_back(flux_operator(gen, j, model.hamiltonian));
  res.correlation = green_kubo_correlation(gen, fluxes, &res.solve_residual);
  const RealVector row_sums = res.correlation.rowwise().sum();
  res.L = RealMatrix(row_sums.asDiagonal()) - res.correlation;
  finish_onsager(res);
  return res;
}

std::vector<double> steady_fluxes(const QuantumState& rho, const PreparedModel& model) {
  const RhsReport rhs = full_rhs(rho, model);
  std::vector<double> out;
  for (const auto& part : rhs.dissipative) out.push_back(-(model.hamiltonian() * part).trace().real());
  return out;
}

OnsagerResult onsager_finite_difference(const SystemModel& model, double beta, double dx,
                                        const SteadyStateOptions& opts) {
  if (!(dx > 0.0)) throw InputError("onsager_finite_difference: dX must be positive");
  for (const auto& b : model.baths)
    if (b.spectral.kind == SpectralFunction::Kind::table)
      throw ConfigError("onsager_finite_difference: tabulated spectral functions cannot be re-temperatured");
  const SystemModel base = model.at_common_beta(beta);
  const QuantumState rho_beta = gibbs_state(base.hamiltonian, beta);

  // Starting at rho_beta the state is O(dX) from the answer: Newton from the outset.
  SteadyStateOptions local = opts;
  local.switch_tolerance = std::max(opts.switch_tolerance, 1e-2);

  const std::size_t n = base.baths.size();
  OnsagerResult res;
  res.method = OnsagerResult::Method::finite_difference;
  res.L = RealMatrix::Zero(n, n);
  auto fluxes_at = [&](std::size_t k, double force) {
    SystemModel shifted = base;
    shifted.baths[k].beta = beta + force;
    const PreparedModel prepared(shifted);
    const SteadyStateResult ss = steady_state(prepared, local, rho_beta);
    if (!ss.converged)
      throw NumericError("onsager_finite_difference: steady state did not converge (residual " +
                         std::to_string(ss.rhs_residual) + ")");
    res.steady_residuals.push_back(ss.rhs_residual);
    std::vector<double> j = steady_fluxes(ss.state, prepared);
    const double sigma = entropy_production(ss.state, prepared).total;
    res.sum_rule_residual = std::max(res.sum_rule_residual, std::abs(sigma - force * j[k]));
    return j;
  };
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<double> up = fluxes_at(k, dx);
    const std::vector<double> down = fluxes_at(k, -dx);
    for (std::size_t j = 0; j < n; ++j) res.L(j, k) = (up[j] - down[j]) / (2.0 * dx);
  }
  finish_onsager(res);
  return res;
}

}  // namespace mds
