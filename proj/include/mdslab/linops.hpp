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

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace mds {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

// Tolerances shared by the state invariants.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;

/// Eigenvalues in ascending order; columns of `basis` are the eigenvectors.
struct EigenSystem {
  RealVector values;
  Matrix basis;

  Eigen::Index dim() const { return values.size(); }
  /// basis * diag(f(values)) * basis^dagger
  Matrix reconstruct(const RealVector& mapped) const;
};

/// Diagonalizes a Hermitian matrix. The input is symmetrized as (A + A^dagger)/2
/// after checking that the anti-Hermitian part is below 1e-10 (max norm).
EigenSystem herm_eig(const Matrix& a);

struct MatrixFunction {
  enum class Kind { log, power, exp };
  Kind kind;
  double parameter = 1.0;  // exponent for power, scale for exp (f(x) = exp(s x))

  static MatrixFunction log() { return {Kind::log, 0.0}; }
  static MatrixFunction power(double lambda) { return {Kind::power, lambda}; }
  static MatrixFunction exp(double scale = 1.0) { return {Kind::exp, scale}; }
};

Matrix matrix_function(const EigenSystem& eig, MatrixFunction f);
Matrix matrix_function(const Matrix& a, MatrixFunction f);

double max_norm(const Matrix& a);
double hermiticity_residual(const Matrix& a);
Matrix hermitize(const Matrix& a);
Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
/// Partial trace over the second factor of a (d1*d2)-dimensional operator.
Matrix partial_trace_second(const Matrix& a, Eigen::Index d1, Eigen::Index d2);
/// Half the trace norm of a - b (both Hermitian).
double trace_distance(const Matrix& a, const Matrix& b);

/// Logarithmic mean (p - q)/(ln p - ln q), with the removable singularity at p = q
/// filled in. Arguments are given as logarithms so that exponentially weighted
/// means (p e^{-x}, q) can be formed without overflow.
double logmean_from_logs(double log_p, double log_q);
double logmean(double p, double q);

/// Strictly positive, unit-trace density matrix with its eigendecomposition cached.
/// Immutable: every new matrix goes through a constructor, so the cache never goes stale.
class QuantumState {
 public:
  /// Validates Hermiticity (1e-10), trace (1e-10) and strict positivity.
  explicit QuantumState(const Matrix& rho);
  /// Hermitizes and divides by the trace, then validates positivity only.
  static QuantumState normalized(const Matrix& rho);
  static QuantumState maximally_mixed(Eigen::Index dim);

  const Matrix& rho() const { return rho_; }
  const EigenSystem& eig() const { return eig_; }
  Eigen::Index dim() const { return rho_.rows(); }
  double min_eigenvalue() const { return eig_.values(0); }
  const RealVector& log_eigenvalues() const { return log_values_; }

  Matrix power(double lambda) const;
  Matrix log() const;
  double von_neumann_entropy() const;

 private:
  struct Unchecked {};
  QuantumState(const Matrix& rho, Unchecked);

  Matrix rho_;
  EigenSystem eig_;
  RealVector log_values_;
};

/// rho_beta = exp(-beta H)/Z, evaluated with H shifted by its smallest eigenvalue.
QuantumState gibbs_state(const Matrix& hamiltonian, double beta);

/// K_rho A = int_0^1 rho^l A rho^{1-l} dl, via logarithmic means in the rho eigenbasis.
Matrix krho_apply(const QuantumState& rho, const Matrix& a);
Matrix krho_inv_apply(const QuantumState& rho, const Matrix& a);

/// Linear map on d x d operators stored as a d^2 x d^2 matrix acting on
/// column-stacked vectorizations.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(Matrix matrix, Eigen::Index dim);

  static Superoperator identity(Eigen::Index dim);
  /// A -> left * A * right
  static Superoperator sandwich(const Matrix& left, const Matrix& right);

  const Matrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return dim_; }

  Matrix apply(const Matrix& a) const;
  /// Heisenberg dual with respect to the pairing tr(F X): tr(F S(X)) = tr(S*(F) X).
  Superoperator dual() const;

  Superoperator operator+(const Superoperator& other) const;
  Superoperator operator-(const Superoperator& other) const;
  Superoperator operator*(const Superoperator& other) const;
  Superoperator operator*(cplx s) const;

 private:
  Matrix matrix_;
  Eigen::Index dim_ = 0;
};

Vector vectorize(const Matrix& a);
Matrix unvectorize(const Vector& v, Eigen::Index dim);

using OperatorMap = std::function<Matrix(const Matrix&)>;

/// Column k is the vectorized image of the k-th matrix unit. Linearity is
/// spot-checked on three deterministic random pairs unless disabled.
Superoperator superop_from_map(const OperatorMap& map, Eigen::Index dim,
                               bool check_linearity = true);

Superoperator krho_superop(const QuantumState& rho);
Superoperator krho_inv_superop(const QuantumState& rho);

}  // namespace mds
