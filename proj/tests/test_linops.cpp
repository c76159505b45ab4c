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

#include "mdslab/errors.hpp"
#include "mdslab/linops.hpp"
#include "mdslab/quadrature.hpp"
#include "support.hpp"

using namespace mds;
using namespace mds::test;

TEST_CASE("herm_eig: Pauli and diagonal inputs") {
  const EigenSystem x = herm_eig(sigma_x());
  CHECK(x.values(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(x.values(1) == doctest::Approx(1.0).epsilon(1e-14));

  const EigenSystem d = herm_eig(diag({0.0, 1.0}));
  CHECK(d.values(0) == 0.0);
  CHECK(d.values(1) == 1.0);
  CHECK(max_norm(d.basis.cwiseAbs().cast<cplx>() - Matrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("herm_eig: reconstruction and unitarity on random 4x4") {
  std::mt19937_64 rng(1);
  const Matrix h = random_hermitian(rng, 4);
  const EigenSystem e = herm_eig(h);
  CHECK(max_norm(e.reconstruct(e.values) - h) < 1e-12);
  CHECK(max_norm(e.basis.adjoint() * e.basis - Matrix::Identity(4, 4)) < 1e-12);
  for (Eigen::Index i = 1; i < 4; ++i) CHECK(e.values(i) >= e.values(i - 1));
}

TEST_CASE("herm_eig: input errors") {
  CHECK_THROWS_AS(herm_eig(Matrix::Zero(2, 3)), InputError);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(herm_eig(a), InputError);
}

TEST_CASE("matrix_function: examples") {
  const Matrix p = matrix_function(diag({0.25, 0.75}), MatrixFunction::power(0.5));
  CHECK(std::abs(p(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(p(1, 1) - std::sqrt(3.0) / 2.0) < 1e-15);
  CHECK(max_norm(matrix_function(Matrix::Identity(3, 3), MatrixFunction::log())) < 1e-15);

  std::mt19937_64 rng(2);
  const QuantumState rho = random_state(rng, 3);
  const Matrix prod = matrix_function(rho.rho(), MatrixFunction::power(0.3)) *
                      matrix_function(rho.rho(), MatrixFunction::power(0.7));
  CHECK(max_norm(prod - rho.rho()) < 1e-12);
  CHECK(max_norm(matrix_function(rho.rho(), MatrixFunction::power(0.0)) - Matrix::Identity(3, 3)) < 1e-12);
  CHECK(max_norm(matrix_function(rho.rho(), MatrixFunction::power(1.0)) - rho.rho()) < 1e-12);
  CHECK(hermiticity_residual(matrix_function(rho.rho(), MatrixFunction::log())) < 1e-12);
}

TEST_CASE("matrix_function: domain error carries the eigenvalue") {
  try {
    matrix_function(diag({-0.5, 1.0}), MatrixFunction::log());
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-0.5));
  }
  CHECK_THROWS_AS(matrix_function(diag({0.0, 1.0}), MatrixFunction::power(0.5)), DomainError);
}

TEST_CASE("QuantumState invariants") {
  CHECK_THROWS_AS(QuantumState(diag({0.5, 0.6})), InputError);
  CHECK_THROWS_AS(QuantumState(diag({1.0, 0.0})), DomainError);
  CHECK_THROWS_AS(QuantumState(diag({1.2, -0.2})), DomainError);
  const QuantumState mixed = QuantumState::maximally_mixed(2);
  CHECK(mixed.von_neumann_entropy() == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const QuantumState s = random_state(rng, 4);
    CHECK(hermiticity_residual(s.rho()) <= 1e-12);
    CHECK(std::abs(s.rho().trace() - 1.0) <= 1e-10);
    CHECK(s.min_eigenvalue() > 0.0);
  }
}

TEST_CASE("gibbs_state: examples") {
  const QuantumState g = gibbs_state(diag({0.0, 1.0}), std::log(2.0));
  CHECK(std::abs(g.rho()(0, 0) - 2.0 / 3.0) < 1e-14);
  CHECK(std::abs(g.rho()(1, 1) - 1.0 / 3.0) < 1e-14);

  const QuantumState flat = gibbs_state(Matrix::Zero(3, 3), 2.0);
  CHECK(max_norm(flat.rho() - Matrix::Identity(3, 3) / 3.0) < 1e-15);

  const QuantumState g3 = gibbs_state(diag({0.0, 1.0, 2.0}), 1.0);
  const double z = 1.0 + std::exp(-1.0) + std::exp(-2.0);
  CHECK(std::abs(g3.rho()(1, 1) - std::exp(-1.0) / z) < 1e-15);
  CHECK(std::abs(g3.rho()(2, 2) - std::exp(-2.0) / z) < 1e-15);

  // Large beta * range: the shift keeps it finite.
  const QuantumState cold = gibbs_state(diag({1000.0, 1001.0}), 30.0);
  CHECK(std::abs(cold.rho()(1, 1) - std::exp(-30.0) / (1.0 + std::exp(-30.0))) < 1e-25);
}

TEST_CASE("logmean branches") {
  CHECK(logmean(0.3, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(logmean(2.0 / 3.0, 1.0 / 3.0) == doctest::Approx((1.0 / 3.0) / std::log(2.0)).epsilon(1e-14));
  const double p = 0.4, q = 0.4 * (1.0 + 1e-11);
  CHECK(logmean(p, q) == doctest::Approx(0.5 * (p + q)).epsilon(1e-14));
  CHECK(logmean_from_logs(std::log(0.2), std::log(0.05)) == doctest::Approx(logmean(0.2, 0.05)).epsilon(1e-14));
}

namespace {

Matrix krho_by_quadrature(const QuantumState& rho, const Matrix& a, int nodes) {
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, 1.0);
  Matrix acc = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    acc += rule.weights[k] * rho.power(rule.nodes[k]) * a * rho.power(1.0 - rule.nodes[k]);
  return acc;
}

}  // namespace

TEST_CASE("krho_apply: closed form vs quadrature and examples") {
  std::mt19937_64 rng(4);
  const QuantumState rho = random_state(rng, 3);
  CHECK(max_norm(krho_apply(rho, Matrix::Identity(3, 3)) - rho.rho()) < 1e-14);

  const QuantumState q(diag({2.0 / 3.0, 1.0 / 3.0}));
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  const Matrix k = krho_apply(q, a);
  CHECK(std::abs(k(0, 1) - 0.480898346962988) < 1e-12);
  CHECK(max_norm(k - krho_by_quadrature(q, a, 64)) < 1e-12);

  const Matrix da = diag({0.7, -1.3});
  CHECK(max_norm(krho_apply(q, da) - q.rho() * da) < 1e-15);

  for (int t = 0; t < 5; ++t) {
    const QuantumState r = random_state(rng, 4, 1e-3);
    const Matrix b = random_matrix(rng, 4);
    CHECK(max_norm(krho_apply(r, b) - krho_by_quadrature(r, b, 64)) < 1e-10);
  }
}

TEST_CASE("krho: inverse, self-adjointness, positivity") {
  std::mt19937_64 rng(5);
  const QuantumState rho = random_state(rng, 3);
  CHECK(max_norm(krho_inv_apply(rho, rho.rho()) - Matrix::Identity(3, 3)) < 1e-12);
  const Matrix a = random_matrix(rng, 3);
  const Matrix b = random_matrix(rng, 3);
  CHECK(max_norm(krho_inv_apply(rho, krho_apply(rho, a)) - a) < 1e-10);
  CHECK(std::abs((a.adjoint() * krho_apply(rho, b)).trace() - (krho_apply(rho, a).adjoint() * b).trace()) < 1e-11);
  // Positive as a form on Hilbert-Schmidt space, not as a map on PSD matrices.
  CHECK(std::real((a.adjoint() * krho_apply(rho, a)).trace()) > 0.0);
  CHECK(std::abs(std::imag((a.adjoint() * krho_apply(rho, a)).trace())) < 1e-13);

  const QuantumState mixed = QuantumState::maximally_mixed(2);
  CHECK(max_norm(krho_inv_apply(mixed, a.topLeftCorner(2, 2)) - 2.0 * a.topLeftCorner(2, 2)) < 1e-14);
}

TEST_CASE("krho_inv_apply: conditioning error near the boundary") {
  const QuantumState tiny(diag({1.0 - 1e-300, 1e-300}));
  try {
    krho_inv_apply(tiny, diag({0.0, 1.0}));
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    CHECK(e.smallest() < 1e-15);
  }
}

TEST_CASE("superop_from_map: examples") {
  const Superoperator id = superop_from_map([](const Matrix& a) { return a; }, 2);
  CHECK(max_norm(id.matrix() - Matrix::Identity(4, 4)) == 0.0);

  const Matrix h = diag({0.0, 1.0});
  const Superoperator ad = superop_from_map([&](const Matrix& a) { return commutator(h, a); }, 2);
  CHECK(max_norm(ad.matrix() - Matrix(Vector(Eigen::Vector4cd(0.0, 1.0, -1.0, 0.0)).asDiagonal())) < 1e-15);

  std::mt19937_64 rng(6);
  const QuantumState rho = random_state(rng, 3);
  const Matrix half = rho.power(0.5);
  const Superoperator s = superop_from_map([&](const Matrix& a) { return Matrix(half * a * half); }, 3);
  const Matrix a = random_matrix(rng, 3);
  CHECK(max_norm(s.apply(a) - half * a * half) < 1e-12);
  CHECK(max_norm(s.apply(Matrix::Identity(3, 3)) - rho.rho()) < 1e-12);
  CHECK(max_norm(Superoperator::sandwich(half, half).matrix() - s.matrix()) < 1e-12);
}

TEST_CASE("superop_from_map: nonlinear map is rejected") {
  CHECK_THROWS_AS(superop_from_map([](const Matrix& a) { return Matrix(a * a); }, 2), LinearityError);
}

TEST_CASE("Superoperator dual and algebra") {
  std::mt19937_64 rng(7);
  const Matrix l = random_matrix(rng, 3);
  const Matrix r = random_matrix(rng, 3);
  const Superoperator s = Superoperator::sandwich(l, r);
  const Matrix f = random_matrix(rng, 3);
  const Matrix x = random_matrix(rng, 3);
  CHECK(std::abs((f * s.apply(x)).trace() - (s.dual().apply(f) * x).trace()) < 1e-12);
  CHECK(max_norm(s.dual().apply(f) - r * f * l) < 1e-12);
  CHECK(max_norm((s * s).apply(x) - s.apply(s.apply(x))) < 1e-11);
  const QuantumState rho = random_state(rng, 3);
  CHECK(max_norm((krho_inv_superop(rho) * krho_superop(rho)).matrix() - Matrix::Identity(9, 9)) < 1e-10);
}

TEST_CASE("vectorization is column-major and invertible") {
  Matrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const Vector v = vectorize(a);
  CHECK(v(1) == cplx(3.0));
  CHECK(v(2) == cplx(2.0));
  CHECK(max_norm(unvectorize(v, 2) - a) == 0.0);
}

TEST_CASE("kron, partial trace and trace distance") {
  std::mt19937_64 rng(8);
  const QuantumState a = random_state(rng, 3);
  const QuantumState b = random_state(rng, 2);
  CHECK(max_norm(partial_trace_second(kron(a.rho(), b.rho()), 3, 2) - a.rho()) < 1e-15);
  CHECK(trace_distance(diag({1.0, 0.0}), diag({0.0, 1.0})) == doctest::Approx(1.0));
  CHECK(trace_distance(a.rho(), a.rho()) < 1e-15);
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const QuadratureRule r = gauss_legendre(8, -1.0, 2.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * std::pow(r.nodes[k], 15);
  CHECK(acc == doctest::Approx((std::pow(2.0, 16) - 1.0) / 16.0).epsilon(1e-13));
}
