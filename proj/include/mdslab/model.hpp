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

#include <limits>
#include <string>
#include <vector>

#include "mdslab/linops.hpp"

namespace mds {

/// Bath spectral function h(nu). The analytic kinds are parameterized by beta so
/// that re-temperaturing a bath keeps the KMS relation h(nu) = e^{beta nu} h(-nu).
struct SpectralFunction {
  enum class Kind { gibbs_exponential, ohmic, table };

  Kind kind = Kind::ohmic;
  double strength = 1.0;
  /// Symmetric cutoff: Gaussian exp(-nu^2/2c^2) for gibbs_exponential,
  /// exponential exp(-|nu|/c) for ohmic. Infinity disables it.
  double cutoff = std::numeric_limits<double>::infinity();
  /// Interpolation table (strictly increasing nu, positive values); used by kind == table.
  std::vector<double> table_nu;
  std::vector<double> table_value;

  static SpectralFunction gibbs_exponential(double strength = 1.0,
                                            double cutoff = std::numeric_limits<double>::infinity());
  static SpectralFunction ohmic(double strength = 1.0,
                                double cutoff = std::numeric_limits<double>::infinity());
  /// Log-linear interpolation between the nodes.
  static SpectralFunction table(std::vector<double> nu, std::vector<double> value);

  double operator()(double nu, double beta) const;
  bool in_support(double nu) const;
};

/// Max relative KMS residual |h(nu) - e^{beta nu} h(-nu)| / h(nu) over the samples.
/// Throws SpectralError if h <= 0 at a sample.
double kms_residual(const SpectralFunction& spec, double beta, const std::vector<double>& nu_samples);

struct GridSpec {
  double half_width_factor = 5.0;
  int points_per_peak = 15;
};

struct CouplingScheme {
  enum class Kind { davies, gaussian, single_q };
  Kind kind = Kind::davies;
  double collision_time = 1.0;  // T, gaussian only
  GridSpec grid;

  static CouplingScheme davies() { return {Kind::davies, 1.0, {}}; }
  static CouplingScheme gaussian(double T, GridSpec grid = {}) { return {Kind::gaussian, T, grid}; }
  static CouplingScheme single_q() { return {Kind::single_q, 1.0, {}}; }
};

std::string to_string(CouplingScheme::Kind kind);

struct BathSpec {
  double beta = 1.0;
  SpectralFunction spectral;
  Matrix coupling;  // R, Hermitian
  CouplingScheme scheme;
};

struct SystemModel {
  Matrix hamiltonian;
  std::vector<BathSpec> baths;

  Eigen::Index dim() const { return hamiltonian.rows(); }
  /// Shape, Hermiticity, positivity of beta, T and KMS of every bath.
  void validate() const;
  /// Copy with every bath at inverse temperature beta.
  SystemModel at_common_beta(double beta) const;
};

/// One summand of a coupling operator: Q^lambda += e^{-lambda beta nu/2} sqrt(weight) op.
struct ChannelTerm {
  Matrix op;
  double nu = 0.0;
  double weight = 0.0;  // h(nu)
};

/// One bracket channel. Davies and Gaussian channels hold a single term; the
/// single-Q scheme holds one channel whose terms are all eigenoperator summands.
struct BracketChannel {
  std::vector<ChannelTerm> terms;
  double quad_weight = 1.0;
};

struct CouplingFamily {
  double beta = 1.0;
  CouplingScheme::Kind scheme = CouplingScheme::Kind::davies;
  std::vector<BracketChannel> channels;

  /// Q^lambda for channel `index`.
  Matrix coupling_operator(std::size_t index, double lambda) const;
  std::size_t term_count() const;
};

struct BohrComponent {
  double nu;
  Matrix op;
};

/// Eigenoperators A_nu of R with [A_nu, H] = nu A_nu, frequencies merged within
/// 1e-9 * spectral range. Components with vanishing operator are dropped.
std::vector<BohrComponent> bohr_decompose(const Matrix& hamiltonian, const Matrix& coupling);
std::vector<BohrComponent> bohr_decompose(const EigenSystem& h_eig, const Matrix& coupling);

/// Normalization of the Gaussian-window transform, (8 pi)^{1/4} sqrt(T).
double gaussian_window_constant(double collision_time);

/// Closed form of int e^{i nu t} sqrt(delta(t,T)) e^{iHt} R e^{-iHt} dt.
Matrix gaussian_window_op(const Matrix& hamiltonian, const Matrix& coupling, double collision_time,
                          double nu);
Matrix gaussian_window_op(const EigenSystem& h_eig, const Matrix& coupling, double collision_time,
                          double nu);

/// Frequency grid for the Gaussian scheme: composite Gauss-Legendre panels around
/// every |Bohr frequency|, mirrored to negative nu. Weights are plain d(nu).
struct FrequencyGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};
FrequencyGrid gaussian_frequency_grid(const std::vector<double>& bohr_frequencies, double collision_time,
                                      const GridSpec& grid);

CouplingFamily build_coupling_family(const BathSpec& bath, const Matrix& hamiltonian);

/// Largest deviation from A_{alpha'} = A_alpha^dagger, nu_{alpha'} = -nu_alpha.
double adjoint_closure_residual(const CouplingFamily& family);

struct ErgodicityReport {
  bool ergodic = false;
  Eigen::Index commutant_dimension = 0;
};

/// Irreducibility of the algebra generated by H and the coupling operators,
/// via the null space of the stacked commutator superoperators.
ErgodicityReport ergodicity_check(const Matrix& hamiltonian, const CouplingFamily& family);
ErgodicityReport ergodicity_check(const Matrix& hamiltonian, const std::vector<Matrix>& operators);

}  // namespace mds
