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

#include "mdslab/dissipator.hpp"

#include <cmath>

#include "mdslab/errors.hpp"
#include "mdslab/quadrature.hpp"

namespace mds {

namespace {

// Coupling terms rotated into the eigenbasis of rho.
struct RotatedTerm {
  Matrix op;
  double nu;
  double amplitude;  // sqrt(h(nu))
};

std::vector<RotatedTerm> rotate_terms(const BracketChannel& ch, const Matrix& basis) {
  std::vector<RotatedTerm> out;
  out.reserve(ch.terms.size());
  for (const auto& t : ch.terms) out.push_back({basis.adjoint() * t.op * basis, t.nu, std::sqrt(t.weight)});
  return out;
}

// W_mn = int_0^1 (p_m e^{-beta s})^l p_n^{1-l} dl
Matrix weighted_logmeans(const RealVector& log_p, double shift) {
  const Eigen::Index d = log_p.size();
  Matrix w(d, d);
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m) w(m, n) = logmean_from_logs(log_p(m) - shift, log_p(n));
  return w;
}

Matrix rotated_coupling(const std::vector<RotatedTerm>& terms, double beta, double lambda) {
  Matrix q = Matrix::Zero(terms.front().op.rows(), terms.front().op.cols());
  for (const auto& t : terms) q += std::exp(-0.5 * lambda * beta * t.nu) * t.amplitude * t.op;
  return q;
}

}  // namespace

Matrix delta_s(const QuantumState& rho, double beta, const Matrix& hamiltonian) {
  if (hamiltonian.rows() != rho.dim()) throw InputError("delta_s: dimension mismatch");
  return hermitize(-rho.log() - beta * hamiltonian);
}

BracketValue modular_bracket(const QuantumState& rho, const CouplingFamily& family, const Matrix& a,
                             const Matrix& b, int nodes, double tol) {
  const Matrix& v = rho.eig().basis;
  const Eigen::Index d = rho.dim();
  const Matrix a_dag = v.adjoint() * a.adjoint() * v;
  const Matrix b_rot = v.adjoint() * b * v;
  const RealVector& log_p = rho.log_eigenvalues();

  auto integrate = [&](int n) {
    const QuadratureRule rule = gauss_legendre(n, 0.0, 1.0);
    Matrix acc = Matrix::Zero(d, d);
    for (const auto& ch : family.channels) {
      const auto terms = rotate_terms(ch, v);
      Matrix ch_acc = Matrix::Zero(d, d);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double l = rule.nodes[k];
        const Matrix q = rotated_coupling(terms, family.beta, l);
        const Vector up = (0.5 * l * log_p.array()).exp().cast<cplx>().matrix();
        const Vector down = (-0.5 * l * log_p.array()).exp().cast<cplx>().matrix();
        const Matrix x1 = up.asDiagonal() * (kI * commutator(q, a_dag)) * down.asDiagonal();
        const Matrix x2 = up.asDiagonal() * (kI * commutator(q, b_rot)) * down.asDiagonal();
        ch_acc += rule.weights[k] * (x1.adjoint() * x2);
      }
      acc += ch.quad_weight * ch_acc;
    }
    return Matrix(kBracketNormalization * v * acc * v.adjoint());
  };

  BracketValue out;
  out.value = integrate(nodes);
  const Matrix refined = integrate(2 * nodes);
  out.error_estimate = max_norm(refined - out.value);
  out.converged = out.error_estimate <= tol * std::max(1.0, max_norm(refined));
  return out;
}

Matrix dual_bracket(const QuantumState& rho, const CouplingFamily& family, const Matrix& y) {
  const Matrix& v = rho.eig().basis;
  const Eigen::Index d = rho.dim();
  const Matrix y_rot = v.adjoint() * y * v;
  const RealVector& log_p = rho.log_eigenvalues();
  Matrix acc = Matrix::Zero(d, d);
  for (const auto& ch : family.channels) {
    const auto terms = rotate_terms(ch, v);
    std::vector<Matrix> comm;
    comm.reserve(terms.size());
    for (const auto& t : terms) comm.push_back(commutator(t.op, y_rot));
    Matrix ch_acc = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const double shift = 0.5 * family.beta * (terms[i].nu + terms[k].nu);
        const Matrix inner = comm[i].cwiseProduct(weighted_logmeans(log_p, shift));
        ch_acc += terms[i].amplitude * terms[k].amplitude * commutator(terms[k].op.adjoint(), inner);
      }
    }
    acc += ch.quad_weight * ch_acc;
  }
  return kBracketNormalization * v * acc * v.adjoint();
}

Matrix dual_bracket_quadrature(const QuantumState& rho, const CouplingFamily& family, const Matrix& y,
                               int nodes) {
  const Matrix& v = rho.eig().basis;
  const Eigen::Index d = rho.dim();
  const Matrix y_rot = v.adjoint() * y * v;
  const RealVector& log_p = rho.log_eigenvalues();
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, 1.0);
  Matrix acc = Matrix::Zero(d, d);
  for (const auto& ch : family.channels) {
    const auto terms = rotate_terms(ch, v);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double l = rule.nodes[k];
      const Matrix q = rotated_coupling(terms, family.beta, l);
      const Vector left = (l * log_p.array()).exp().cast<cplx>().matrix();
      const Vector right = ((1.0 - l) * log_p.array()).exp().cast<cplx>().matrix();
      const Matrix inner = left.asDiagonal() * commutator(q, y_rot) * right.asDiagonal();
      acc += ch.quad_weight * rule.weights[k] * commutator(q.adjoint(), inner);
    }
  }
  return kBracketNormalization * v * acc * v.adjoint();
}

Matrix mds_dissipator(const QuantumState& rho, const CouplingFamily& family, const Matrix& hamiltonian) {
  return dual_bracket(rho, family, delta_s(rho, family.beta, hamiltonian));
}

Matrix davies_dissipator(const QuantumState& rho, const CouplingFamily& family) {
  const Matrix& r = rho.rho();
  Matrix out = Matrix::Zero(r.rows(), r.cols());
  for (const auto& ch : family.channels) {
    if (ch.terms.size() != 1) throw InputError("davies_dissipator: expects single-term channels");
    const ChannelTerm& t = ch.terms.front();
    const Matrix ada = t.op.adjoint() * t.op;
    out += ch.quad_weight * t.weight * (t.op * r * t.op.adjoint() - 0.5 * anticommutator(ada, r));
  }
  return out;
}

Matrix davies_rhs(const QuantumState& rho, const CouplingFamily& family, const Matrix& hamiltonian) {
  return -kI * commutator(hamiltonian, rho.rho()) + davies_dissipator(rho, family);
}

PreparedModel::PreparedModel(SystemModel model, bool validate) : model_(std::move(model)) {
  if (validate) model_.validate();
  std::vector<Matrix> ops;
  for (const auto& bath : model_.baths) {
    families_.push_back(build_coupling_family(bath, model_.hamiltonian));
    for (const auto& ch : families_.back().channels)
      for (const auto& t : ch.terms) ops.push_back(t.op);
  }
  ergodic_ = ergodicity_check(model_.hamiltonian, ops).ergodic;
}

RhsReport full_rhs(const QuantumState& rho, const PreparedModel& model) {
  if (rho.dim() != model.dim()) throw InputError("full_rhs: state dimension does not match model");
  RhsReport out;
  out.hamiltonian_part = -kI * commutator(model.hamiltonian(), rho.rho());
  out.drho_dt = out.hamiltonian_part;
  for (const auto& fam : model.families()) {
    out.dissipative.push_back(mds_dissipator(rho, fam, model.hamiltonian()));
    out.drho_dt += out.dissipative.back();
  }
  return out;
}

}  // namespace mds
