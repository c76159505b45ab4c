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
#include <numbers>

#include "mdslab/errors.hpp"
#include "mdslab/model.hpp"
#include "mdslab/quadrature.hpp"
#include "support.hpp"

using namespace mds;
using namespace mds::test;

namespace {

// Direct quadrature of int e^{i nu t} sqrt(delta(t,T)) e^{iHt} R e^{-iHt} dt,
// delta the normalized Gaussian of variance 2 T^2.
Matrix window_by_time_quadrature(const Matrix& h, const Matrix& r, double T, double nu) {
  const EigenSystem e = herm_eig(h);
  const Matrix r_eig = e.basis.adjoint() * r * e.basis;
  const double amp = std::pow(2.0 * std::numbers::pi * T * T, -0.25);
  const double half = 12.0 * T;
  const int panels = 240;
  const QuadratureRule unit = gauss_legendre(20, 0.0, 1.0);
  const Eigen::Index d = h.rows();
  Matrix acc = Matrix::Zero(d, d);
  for (int p = 0; p < panels; ++p) {
    const double a = -half + 2.0 * half * p / panels;
    const double width = 2.0 * half / panels;
    for (std::size_t k = 0; k < unit.nodes.size(); ++k) {
      const double t = a + width * unit.nodes[k];
      const double w = width * unit.weights[k] * amp * std::exp(-t * t / (4.0 * T * T));
      for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index n = 0; n < d; ++n) {
          const double phase = (nu + e.values(m) - e.values(n)) * t;
          acc(m, n) += w * cplx(std::cos(phase), std::sin(phase)) * r_eig(m, n);
        }
    }
  }
  return e.basis * acc * e.basis.adjoint();
}

}  // namespace

TEST_CASE("kms_residual: examples") {
  const std::vector<double> nus{-2.0, -0.5, 0.0, 0.7, 3.0};
  CHECK(kms_residual(SpectralFunction::gibbs_exponential(0.3), 1.7, nus) < 1e-14);
  CHECK(kms_residual(SpectralFunction::gibbs_exponential(0.3, 2.0), 0.4, nus) < 1e-14);
  CHECK(kms_residual(SpectralFunction::ohmic(1.0), 1.0, nus) < 1e-14);
  CHECK(kms_residual(SpectralFunction::ohmic(0.2, 5.0), 2.0, nus) < 1e-14);
  CHECK(SpectralFunction::ohmic(1.0)(0.0, 2.0) == doctest::Approx(0.5));
  CHECK(SpectralFunction::ohmic(1.0)(1.0, 1.0) == doctest::Approx(1.0 / (1.0 - std::exp(-1.0))).epsilon(1e-14));

  const SpectralFunction flat = SpectralFunction::table({-5.0, 5.0}, {1.0, 1.0});
  CHECK(kms_residual(flat, 1.0, {1.0}) == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-12));
}

TEST_CASE("kms_residual: non-positive spectral values are rejected") {
  CHECK_THROWS_AS(kms_residual(SpectralFunction::gibbs_exponential(0.0), 1.0, {0.5}), SpectralError);
}

TEST_CASE("SystemModel::validate rejects a flat spectral table") {
  SystemModel m{diag({0.0, 1.0}), {BathSpec{1.0, SpectralFunction::table({-5.0, 5.0}, {1.0, 1.0}), sigma_x(),
                                            CouplingScheme::davies()}}};
  CHECK_THROWS_AS(m.validate(), SpectralError);
  m.baths[0].beta = -1.0;
  CHECK_THROWS(m.validate());
}

TEST_CASE("bohr_decompose: qubit and commuting cases") {
  const auto comps = bohr_decompose(diag({0.0, 1.0}), sigma_x());
  REQUIRE(comps.size() == 2);
  for (const auto& c : comps) {
    Matrix expect = Matrix::Zero(2, 2);
    if (c.nu > 0) expect(0, 1) = 1.0;
    else expect(1, 0) = 1.0;
    CHECK(std::abs(std::abs(c.nu) - 1.0) < 1e-14);
    CHECK(max_norm(c.op - expect) < 1e-14);
  }

  const Matrix r = diag({0.3, -0.2, 1.1});
  const auto one = bohr_decompose(diag({0.0, 1.0, 2.5}), r);
  REQUIRE(one.size() == 1);
  CHECK(one[0].nu == 0.0);
  CHECK(max_norm(one[0].op - r) < 1e-14);
}

TEST_CASE("bohr_decompose: reconstruction, eigen-relation and adjoint pairing") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix h = random_hermitian(rng, 4);
    const Matrix r = random_hermitian(rng, 4);
    const auto comps = bohr_decompose(h, r);
    Matrix sum = Matrix::Zero(4, 4);
    for (const auto& c : comps) {
      sum += c.op;
      CHECK(max_norm(commutator(c.op, h) - c.nu * c.op) < 1e-10);
      bool paired = false;
      for (const auto& o : comps)
        if (std::abs(o.nu + c.nu) < 1e-9 && max_norm(o.op - c.op.adjoint()) < 1e-12) paired = true;
      CHECK(paired);
    }
    CHECK(max_norm(sum - r) < 1e-12);
  }
}

TEST_CASE("gaussian_window_op: constant and time-integral oracle") {
  CHECK(gaussian_window_constant(2.0) ==
        doctest::Approx(std::pow(8.0 * std::numbers::pi, 0.25) * std::sqrt(2.0)).epsilon(1e-15));

  const Matrix h = diag({0.0, 1.0, 2.5});
  std::mt19937_64 rng(12);
  const Matrix r = random_hermitian(rng, 3);
  for (double T : {0.7, 2.0}) {
    for (double nu : {-1.5, -1.0, 0.0, 0.4, 2.5}) {
      const Matrix closed = gaussian_window_op(h, r, T, nu);
      CHECK(max_norm(closed - window_by_time_quadrature(h, r, T, nu)) < 1e-8);
      CHECK(max_norm(closed.adjoint() - gaussian_window_op(h, r, T, -nu)) < 1e-12);
    }
  }

  // Resonance: omega_{nm} = E_n - E_m = 1 at (m, n) = (0, 1).
  const double T = 1.5;
  const Matrix res = gaussian_window_op(h, r, T, 1.0);
  CHECK(std::abs(res(0, 1) - gaussian_window_constant(T) * r(0, 1)) < 1e-13);

  const Matrix rd = diag({0.4, -0.3, 1.0});
  const Matrix wd = gaussian_window_op(h, rd, T, 0.8);
  CHECK(max_norm(wd - std::exp(-T * T * 0.64) * gaussian_window_constant(T) * rd) < 1e-14);
  CHECK(max_norm(wd - window_by_time_quadrature(h, rd, T, 0.8)) < 1e-8);
}

TEST_CASE("gaussian_window_op: off-resonant decay like exp(-T^2)") {
  const Matrix h = diag({0.0, 1.0});
  const Matrix r = sigma_x();
  for (double T : {2.0, 3.0}) {
    const cplx on = gaussian_window_op(h, r, T, 1.0)(0, 1);
    const cplx off = gaussian_window_op(h, r, T, 2.0)(0, 1);
    CHECK(std::abs(off) / std::abs(on) == doctest::Approx(std::exp(-T * T)).epsilon(1e-10));
  }
}

TEST_CASE("gaussian_frequency_grid covers every Bohr frequency") {
  const GridSpec spec{5.0, 15};
  const double T = 2.0;
  const FrequencyGrid g = gaussian_frequency_grid({1.0, 2.5}, T, spec);
  for (double c : {-2.5, -1.0, 1.0, 2.5}) {
    int inside = 0;
    for (double n : g.nodes)
      if (std::abs(n - c) <= spec.half_width_factor / T) ++inside;
    CHECK(inside >= spec.points_per_peak);
  }
  // The weights integrate a Gaussian centred on a peak.
  double acc = 0.0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k)
    acc += g.weights[k] * std::exp(-2.0 * T * T * (g.nodes[k] - 1.0) * (g.nodes[k] - 1.0));
  CHECK(acc == doctest::Approx(std::sqrt(std::numbers::pi / (2.0 * T * T))).epsilon(1e-6));
}

TEST_CASE("build_coupling_family: davies qubit weights obey the KMS ratio") {
  const double beta = 0.8;
  const BathSpec bath{beta, SpectralFunction::ohmic(0.3), sigma_x(), CouplingScheme::davies()};
  const CouplingFamily fam = build_coupling_family(bath, diag({0.0, 1.0}));
  REQUIRE(fam.channels.size() == 2);
  double w_plus = 0.0, w_minus = 0.0;
  for (const auto& ch : fam.channels) {
    REQUIRE(ch.terms.size() == 1);
    CHECK(ch.quad_weight == 1.0);
    (ch.terms[0].nu > 0 ? w_plus : w_minus) = ch.terms[0].weight;
  }
  CHECK(w_plus / w_minus == doctest::Approx(std::exp(beta)).epsilon(1e-13));
  CHECK(adjoint_closure_residual(fam) < 1e-12);
}

TEST_CASE("build_coupling_family: gaussian weights positive and closed under adjoint") {
  const BathSpec bath{1.0, SpectralFunction::ohmic(0.2, 5.0), sigma_x(), CouplingScheme::gaussian(2.0)};
  const CouplingFamily fam = build_coupling_family(bath, diag({0.0, 1.0}));
  CHECK(fam.channels.size() > 2);
  for (const auto& ch : fam.channels) {
    CHECK(ch.quad_weight > 0.0);
    for (const auto& t : ch.terms) CHECK(t.weight > 0.0);
  }
  CHECK(adjoint_closure_residual(fam) < 1e-12);
}

TEST_CASE("build_coupling_family: single_q has one channel with the expected midpoint operator") {
  const double beta = 1.3;
  const SpectralFunction spec = SpectralFunction::gibbs_exponential(0.5);
  const BathSpec bath{beta, spec, sigma_x(), CouplingScheme::single_q()};
  const Matrix h = diag({0.0, 1.0});
  const CouplingFamily fam = build_coupling_family(bath, h);
  REQUIRE(fam.channels.size() == 1);
  Matrix expect = Matrix::Zero(2, 2);
  for (const auto& c : bohr_decompose(h, sigma_x()))
    expect += std::exp(-beta * c.nu / 4.0) * std::sqrt(spec(c.nu, beta)) * c.op;
  CHECK(max_norm(fam.coupling_operator(0, 0.5) - expect) < 1e-14);
  CHECK(max_norm(fam.coupling_operator(0, 0.3).adjoint() - fam.coupling_operator(0, 0.7)) < 1e-14);
}

TEST_CASE("ergodicity_check: examples") {
  const Matrix h = diag({0.0, 1.0});
  Matrix lower = Matrix::Zero(2, 2);
  lower(1, 0) = 1.0;
  const ErgodicityReport q = ergodicity_check(h, std::vector<Matrix>{lower, Matrix(lower.adjoint())});
  CHECK(q.ergodic);
  CHECK(q.commutant_dimension == 1);

  const ErgodicityReport same = ergodicity_check(h, std::vector<Matrix>{h});
  CHECK_FALSE(same.ergodic);
  CHECK(same.commutant_dimension == 2);

  // Blocks {0,1} and {2,3}.
  const Matrix hb = diag({0.0, 1.0, 2.0, 3.5});
  Matrix rb = Matrix::Zero(4, 4);
  rb(0, 1) = rb(1, 0) = 1.0;
  rb(2, 3) = rb(3, 2) = 1.0;
  const ErgodicityReport block = ergodicity_check(hb, std::vector<Matrix>{rb});
  CHECK_FALSE(block.ergodic);
  CHECK(block.commutant_dimension >= 2);

  const BathSpec bath{1.0, SpectralFunction::ohmic(0.2), sigma_x(), CouplingScheme::davies()};
  CHECK(ergodicity_check(h, build_coupling_family(bath, h)).ergodic);
}

TEST_CASE("at_common_beta rescales every bath") {
  SystemModel m{diag({0.0, 1.0}),
                {BathSpec{1.0, SpectralFunction::ohmic(0.2), sigma_x(), CouplingScheme::davies()},
                 BathSpec{0.5, SpectralFunction::ohmic(0.1), sigma_z(), CouplingScheme::davies()}}};
  const SystemModel c = m.at_common_beta(2.0);
  for (const auto& b : c.baths) CHECK(b.beta == 2.0);
}
