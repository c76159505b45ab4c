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

#include <string>
#include <vector>

#include "mdslab/dissipator.hpp"
#include "mdslab/dynamics.hpp"

namespace mds {

/// Linearization of the MDS generator at the Gibbs state of a common beta.
struct LinearizedGenerator {
  double beta = 1.0;
  QuantumState rho_beta;
  Superoperator hamiltonian_part;                 // -i[H, .]
  std::vector<Superoperator> dissipative_parts;   // per bath
  Superoperator dissipative;                      // sum of the parts
  Superoperator d_bar;                            // hamiltonian_part + dissipative
  Superoperator d_bar_star;                       // Heisenberg dual of d_bar
  bool ergodic = true;
  std::string warning;
};

/// Linearized dissipator of one bath at rho_beta:  delta -> -M(K^{-1} delta).
Matrix linearized_dissipator_apply(const QuantumState& rho_beta, const CouplingFamily& family,
                                   const Matrix& delta);

LinearizedGenerator linearized_generator(const SystemModel& model, double beta);

struct DetailedBalanceReport {
  /// || D^{d*} - K^{-1} D^d K ||_max for the summed dissipative part.
  double dissipative = 0.0;
  /// || D_H^* + K^{-1} D_H K ||_max; the Hamiltonian part is Kubo-antisymmetric.
  double hamiltonian_reversal = 0.0;
  /// || D_bar^* - K^{-1} D_bar K ||_max taken literally (equals 2 ||ad_H|| when H != 0).
  double literal = 0.0;
  /// max(dissipative, hamiltonian_reversal, per-bath dissipative residuals).
  double residual = 0.0;
};

DetailedBalanceReport detailed_balance(const LinearizedGenerator& gen);
/// || D_bar^* - K^{-1} Theta(D_bar) K ||_max, Theta flipping the sign of the Hamiltonian part.
double detailed_balance_residual(const LinearizedGenerator& gen);

/// J_j = D_bar^{d*}_j (H_S)
Matrix flux_operator(const LinearizedGenerator& gen, std::size_t bath, const Matrix& hamiltonian);

/// <A; B>_beta = tr(A^dagger K_rho B)
cplx kubo_inner(const Matrix& a, const Matrix& b, const QuantumState& rho);

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  // sorted by decreasing real part
  int zero_count = 0;             // |lambda| < 1e-9
  int positive_real_count = 0;    // Re lambda > 1e-10
  double max_real_nonzero = 0.0;  // largest Re among eigenvalues with |lambda| >= 1e-9
  double spectral_gap = 0.0;      // -max_real_nonzero
  Matrix zero_mode;               // normalized to unit trace
  double zero_mode_distance = 0.0;  // max norm to rho_beta
};

SpectrumReport generator_spectrum(const LinearizedGenerator& gen);

struct OnsagerResult {
  enum class Method { green_kubo, finite_difference };
  Method method = Method::green_kubo;
  RealMatrix L;            // Onsager matrix: steady flux J_j per force X_k
  RealMatrix correlation;  // G_jk = int_0^inf <J_j(t); J_k> dt (green_kubo only)
  double symmetry_residual = 0.0;  // |L - L^T|_max / |L|_max
  double min_symmetric_eigenvalue = 0.0;
  // Diagnostics
  int kernel_rank = 0;
  double spectral_gap = 0.0;
  double solve_residual = 0.0;
  double sum_rule_residual = 0.0;  // finite difference: max_k |sum_j X_j J_j - sigma(rho_+)|
  std::vector<double> steady_residuals;
};

std::string to_string(OnsagerResult::Method m);

/// G_jk = <(-D_bar^*)^{-1} P J_j ; J_k>, P removing the rho_beta mean, by a bordered
/// solve on the complement of ker(D_bar^*).
RealMatrix green_kubo_correlation(const LinearizedGenerator& gen, const std::vector<Matrix>& fluxes,
                                  double* solve_residual = nullptr);

/// Resolvent evaluation of G = int <J_j(t); J_k> dt on the complement of ker(D_bar^*),
/// then L = diag(G 1) - G.
OnsagerResult onsager_green_kubo(const SystemModel& model, double beta);

/// Steady energy flux into bath j: J_j = -tr(H D^d_j(rho)).
std::vector<double> steady_fluxes(const QuantumState& rho, const PreparedModel& model);

/// Central differences: beta_k = beta +- dX (others at beta), fluxes of the steady states.
OnsagerResult onsager_finite_difference(const SystemModel& model, double beta, double dx,
                                        const SteadyStateOptions& opts = {});

}  // namespace mds
