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

#include "mdslab/linops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "mdslab/errors.hpp"

namespace mds {

namespace {

// Below this the logarithmic mean is treated as vanished when inverting K_rho.
constexpr double kLogmeanFloor = 1e-15;
constexpr double kEqualLogTol = 1e-9;

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InputError(std::string(what) + ": expected a non-empty square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

// Logarithmic-mean weights in the eigenbasis of rho.
Matrix logmean_weights(const QuantumState& rho) {
  const auto& lv = rho.log_eigenvalues();
  const Eigen::Index d = lv.size();
  Matrix w(d, d);
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m) w(m, n) = logmean_from_logs(lv(m), lv(n));
  return w;
}

}  // namespace

Matrix EigenSystem::reconstruct(const RealVector& mapped) const {
  return basis * mapped.cast<cplx>().asDiagonal() * basis.adjoint();
}

double max_norm(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_residual(const Matrix& a) { return max_norm(a - a.adjoint()); }

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace_second(const Matrix& a, Eigen::Index d1, Eigen::Index d2) {
  if (a.rows() != d1 * d2 || a.cols() != d1 * d2)
    throw InputError("partial_trace_second: dimension mismatch");
  Matrix out = Matrix::Zero(d1, d1);
  for (Eigen::Index i = 0; i < d1; ++i)
    for (Eigen::Index j = 0; j < d1; ++j)
      for (Eigen::Index k = 0; k < d2; ++k) out(i, j) += a(i * d2 + k, j * d2 + k);
  return out;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a - b), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double logmean_from_logs(double log_p, double log_q) {
  const double hi = std::max(log_p, log_q);
  const double l = std::min(log_p, log_q) - hi;  // <= 0
  if (-l < kEqualLogTol) return 0.5 * (std::exp(log_p) + std::exp(log_q));
  return std::exp(hi) * std::expm1(l) / l;
}

double logmean(double p, double q) { return logmean_from_logs(std::log(p), std::log(q)); }

EigenSystem herm_eig(const Matrix& a) {
  require_square(a, "herm_eig");
  const double scale = std::max(1.0, max_norm(a));
  const double res = hermiticity_residual(a);
  if (!(res <= kHermitianTol * scale)) {
    throw InputError("herm_eig: matrix is not Hermitian (anti-Hermitian residual " +
                     std::to_string(res) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a));
  if (es.info() != Eigen::Success) throw NumericError("herm_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix matrix_function(const EigenSystem& eig, MatrixFunction f) {
  RealVector mapped(eig.dim());
  for (Eigen::Index k = 0; k < eig.dim(); ++k) {
    const double x = eig.values(k);
    switch (f.kind) {
      case MatrixFunction::Kind::log:
        if (!(x > 0.0)) throw DomainError("matrix_function: log of non-positive eigenvalue", x);
        mapped(k) = std::log(x);
        break;
      case MatrixFunction::Kind::power:
        if (f.parameter == 0.0) {
          mapped(k) = 1.0;
        } else if (x > 0.0) {
          mapped(k) = std::pow(x, f.parameter);
        } else if (f.parameter == std::round(f.parameter) && f.parameter > 0.0) {
          mapped(k) = std::pow(x, f.parameter);
        } else {
          throw DomainError("matrix_function: non-integer power of non-positive eigenvalue", x);
        }
        break;
      case MatrixFunction::Kind::exp:
        mapped(k) = std::exp(f.parameter * x);
        break;
    }
  }
  return hermitize(eig.reconstruct(mapped));
}

Matrix matrix_function(const Matrix& a, MatrixFunction f) { return matrix_function(herm_eig(a), f); }

// --- QuantumState -----------------------------------------------------------

QuantumState::QuantumState(const Matrix& rho, Unchecked) : rho_(hermitize(rho)) {
  eig_ = herm_eig(rho_);
  if (!(eig_.values(0) > 0.0))
    throw DomainError("QuantumState: density matrix is not strictly positive", eig_.values(0));
  log_values_ = eig_.values.array().log().matrix();
}

QuantumState::QuantumState(const Matrix& rho) : QuantumState(rho, Unchecked{}) {
  const double scale = std::max(1.0, max_norm(rho));
  const double res = hermiticity_residual(rho);
  if (!(res <= kHermitianTol * scale))
    throw InputError("QuantumState: density matrix is not Hermitian (residual " +
                     std::to_string(res) + ")");
  const double drift = std::abs(rho.trace() - cplx(1.0));
  if (!(drift <= kTraceTol))
    throw InputError("QuantumState: trace differs from 1 by " + std::to_string(drift));
}

QuantumState QuantumState::normalized(const Matrix& rho) {
  require_square(rho, "QuantumState::normalized");
  const Matrix h = hermitize(rho);
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw DomainError("QuantumState::normalized: non-positive trace", tr);
  return QuantumState(h / tr, Unchecked{});
}

QuantumState QuantumState::maximally_mixed(Eigen::Index dim) {
  return QuantumState(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

Matrix QuantumState::power(double lambda) const {
  return eig_.reconstruct((lambda * log_values_.array()).exp().matrix());
}

Matrix QuantumState::log() const { return eig_.reconstruct(log_values_); }

double QuantumState::von_neumann_entropy() const {
  return -(eig_.values.array() * log_values_.array()).sum();
}

QuantumState gibbs_state(const Matrix& hamiltonian, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw InputError("gibbs_state: beta must be finite and positive");
  const EigenSystem eig = herm_eig(hamiltonian);
  const double e0 = eig.values(0);
  RealVector weights = (-beta * (eig.values.array() - e0)).exp().matrix();
  weights /= weights.sum();
  return QuantumState::normalized(eig.reconstruct(weights));
}

Matrix krho_apply(const QuantumState& rho, const Matrix& a) {
  const Matrix& v = rho.eig().basis;
  const Matrix in_basis = v.adjoint() * a * v;
  return v * in_basis.cwiseProduct(logmean_weights(rho)) * v.adjoint();
}

Matrix krho_inv_apply(const QuantumState& rho, const Matrix& a) {
  const Matrix w = logmean_weights(rho);
  const double smallest = w.real().minCoeff();
  if (!(smallest > kLogmeanFloor))
    throw ConditioningError("krho_inv_apply: logarithmic mean underflow", smallest);
  const Matrix& v = rho.eig().basis;
  const Matrix in_basis = v.adjoint() * a * v;
  return v * in_basis.cwiseQuotient(w) * v.adjoint();
}

// --- Superoperator ----------------------------------------------------------

Vector vectorize(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

Matrix unvectorize(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw InputError("unvectorize: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Superoperator::Superoperator(Matrix matrix, Eigen::Index dim) : matrix_(std::move(matrix)), dim_(dim) {
  if (matrix_.rows() != dim * dim || matrix_.cols() != dim * dim)
    throw InputError("Superoperator: matrix must be d^2 x d^2");
}

Superoperator Superoperator::identity(Eigen::Index dim) {
  return Superoperator(Matrix::Identity(dim * dim, dim * dim), dim);
}

Superoperator Superoperator::sandwich(const Matrix& left, const Matrix& right) {
  return Superoperator(kron(right.transpose(), left), left.rows());
}

Matrix Superoperator::apply(const Matrix& a) const {
  if (a.rows() != dim_ || a.cols() != dim_) throw InputError("Superoperator::apply: dimension mismatch");
  return unvectorize(matrix_ * vectorize(a), dim_);
}

Superoperator Superoperator::dual() const {
  // vec(S*(F)) = P S^T P vec(F), P the transpose permutation.
  const Eigen::Index d = dim_;
  Matrix out(d * d, d * d);
  for (Eigen::Index c = 0; c < d * d; ++c) {
    const Eigen::Index pc = (c % d) * d + c / d;
    for (Eigen::Index r = 0; r < d * d; ++r) {
      const Eigen::Index pr = (r % d) * d + r / d;
      out(r, c) = matrix_(pc, pr);
    }
  }
  return Superoperator(std::move(out), d);
}

Superoperator Superoperator::operator+(const Superoperator& o) const {
  return Superoperator(matrix_ + o.matrix_, dim_);
}
Superoperator Superoperator::operator-(const Superoperator& o) const {
  return Superoperator(matrix_ - o.matrix_, dim_);
}
Superoperator Superoperator::operator*(const Superoperator& o) const {
  return Superoperator(matrix_ * o.matrix_, dim_);
}
Superoperator Superoperator::operator*(cplx s) const { return Superoperator(matrix_ * s, dim_); }

Superoperator superop_from_map(const OperatorMap& map, Eigen::Index dim, bool check_linearity) {
  if (dim <= 0) throw InputError("superop_from_map: dimension must be positive");
  const Eigen::Index n = dim * dim;
  Matrix out(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Matrix unit = Matrix::Zero(dim, dim);
    unit(k % dim, k / dim) = 1.0;
    const Matrix image = map(unit);
    if (image.rows() != dim || image.cols() != dim)
      throw InputError("superop_from_map: map changed the operator dimension");
    out.col(k) = vectorize(image);
  }
  if (check_linearity) {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> g;
    auto random_matrix = [&] {
      Matrix m(dim, dim);
      for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(g(rng), g(rng));
      return m;
    };
    for (int trial = 0; trial < 3; ++trial) {
      const Matrix a = random_matrix();
      const Matrix b = random_matrix();
      const cplx s(g(rng), g(rng));
      const cplx t(g(rng), g(rng));
      const Matrix lhs = map(s * a + t * b);
      const Matrix rhs = s * map(a) + t * map(b);
      const double scale = std::max(1.0, std::max(max_norm(lhs), max_norm(rhs)));
      if (max_norm(lhs - rhs) > 1e-10 * scale)
        throw LinearityError("superop_from_map: map failed the linearity check");
    }
  }
  return Superoperator(std::move(out), dim);
}

Superoperator krho_superop(const QuantumState& rho) {
  return superop_from_map([&](const Matrix& a) { return krho_apply(rho, a); }, rho.dim(), false);
}

Superoperator krho_inv_superop(const QuantumState& rho) {
  return superop_from_map([&](const Matrix& a) { return krho_inv_apply(rho, a); }, rho.dim(), false);
}

}  // namespace mds
