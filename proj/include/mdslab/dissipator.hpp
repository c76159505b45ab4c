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

#include <vector>

#include "mdslab/linops.hpp"
#include "mdslab/model.hpp"

namespace mds {

/// Global normalization of the modular dissipative bracket. With it, the Davies
/// coupling family reproduces the Davies generator term by term.
inline constexpr double kBracketNormalization = 0.5;

/// Delta S = -ln(rho) - beta H_S.
Matrix delta_s(const QuantumState& rho, double beta, const Matrix& hamiltonian);

struct BracketValue {
  Matrix value;
  double error_estimate = 0.0;  // |I_n - I_2n| in max norm
  bool converged = true;
};

/// Primal bracket [[A, B]]_{beta, rho}: lambda-integral of
/// (zeta(i[Q^l, A^dagger]))^dagger zeta(i[Q^l, B]) with zeta(X) = rho^{l/2} X rho^{-l/2},
/// summed over channels, by Gauss-Legendre quadrature in lambda.
BracketValue modular_bracket(const QuantumState& rho, const CouplingFamily& family, const Matrix& a,
                             const Matrix& b, int nodes = 32, double tol = 1e-10);

/// Operator M(Y) with tr(F M(Y)) = tr(rho [[F, Y]]) for all F:
///   M(Y) = c * sum_alpha w_alpha int [Q^{l dagger}, rho^l [Q^l, Y] rho^{1-l}] dl,
/// the lambda-integral done in closed form (exponentially weighted logarithmic means).
Matrix dual_bracket(const QuantumState& rho, const CouplingFamily& family, const Matrix& y);

/// Same map with the lambda-integral by Gauss-Legendre quadrature; kept as an
/// independent cross-check of the closed form.
Matrix dual_bracket_quadrature(const QuantumState& rho, const CouplingFamily& family, const Matrix& y,
                               int nodes = 64);

/// Schroedinger-picture dissipative part D^d(rho) = M(Delta S).
Matrix mds_dissipator(const QuantumState& rho, const CouplingFamily& family, const Matrix& hamiltonian);

/// Lindblad form sum_nu h(nu) (A rho A^dagger - {A^dagger A, rho}/2) over single-term channels.
Matrix davies_dissipator(const QuantumState& rho, const CouplingFamily& family);
/// -i[H, rho] + davies_dissipator.
Matrix davies_rhs(const QuantumState& rho, const CouplingFamily& family, const Matrix& hamiltonian);

/// A validated model with its coupling families built once.
class PreparedModel {
 public:
  explicit PreparedModel(SystemModel model, bool validate = true);

  const SystemModel& model() const { return model_; }
  const Matrix& hamiltonian() const { return model_.hamiltonian; }
  const std::vector<CouplingFamily>& families() const { return families_; }
  std::size_t bath_count() const { return families_.size(); }
  Eigen::Index dim() const { return model_.dim(); }
  double beta(std::size_t j) const { return model_.baths.at(j).beta; }
  bool ergodic() const { return ergodic_; }

 private:
  SystemModel model_;
  std::vector<CouplingFamily> families_;
  bool ergodic_ = false;
};

struct RhsReport {
  Matrix drho_dt;
  Matrix hamiltonian_part;
  std::vector<Matrix> dissipative;
};

RhsReport full_rhs(const QuantumState& rho, const PreparedModel& model);

}  // namespace mds
