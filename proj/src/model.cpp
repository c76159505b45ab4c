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

#include "mdslab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mdslab/errors.hpp"
#include "mdslab/quadrature.hpp"

namespace mds {

namespace {

constexpr double kKmsTol = 1e-8;
constexpr double kMergeTol = 1e-9;

std::vector<double> bohr_sample_set(const Matrix& hamiltonian) {
  const EigenSystem eig = herm_eig(hamiltonian);
  std::vector<double> out;
  for (Eigen::Index m = 0; m < eig.dim(); ++m)
    for (Eigen::Index n = 0; n < eig.dim(); ++n) out.push_back(eig.values(n) - eig.values(m));
  return out;
}

void require_hermitian(const Matrix& a, Eigen::Index dim, const std::string& what) {
  if (a.rows() != dim || a.cols() != dim)
    throw ConfigError(what + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) + ", got " +
                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  if (hermiticity_residual(a) > kHermitianTol * std::max(1.0, max_norm(a)))
    throw ConfigError(what + ": matrix is not Hermitian");
}

}  // namespace

// --- spectral functions ---------------------------------------------------------

SpectralFunction SpectralFunction::gibbs_exponential(double strength, double cutoff) {
  SpectralFunction f;
  f.kind = Kind::gibbs_exponential;
  f.strength = strength;
  f.cutoff = cutoff;
  return f;
}

SpectralFunction SpectralFunction::ohmic(double strength, double cutoff) {
  SpectralFunction f;
  f.kind = Kind::ohmic;
  f.strength = strength;
  f.cutoff = cutoff;
  return f;
}

SpectralFunction SpectralFunction::table(std::vector<double> nu, std::vector<double> value) {
  if (nu.size() != value.size() || nu.size() < 2)
    throw ConfigError("spectral table: need at least two (nu, h) pairs of equal length");
  for (std::size_t i = 0; i + 1 < nu.size(); ++i)
    if (!(nu[i + 1] > nu[i])) throw ConfigError("spectral table: nu must be strictly increasing");
  for (double v : value)
    if (!(v > 0.0)) throw SpectralError("spectral table: h(nu) must be positive", v);
  SpectralFunction f;
  f.kind = Kind::table;
  f.table_nu = std::move(nu);
  f.table_value = std::move(value);
  return f;
}

bool SpectralFunction::in_support(double nu) const {
  if (kind != Kind::table) return std::isfinite(nu);
  return nu >= table_nu.front() && nu <= table_nu.back();
}

double SpectralFunction::operator()(double nu, double beta) const {
  switch (kind) {
    case Kind::gibbs_exponential: {
      double v = strength * std::exp(0.5 * beta * nu);
      if (std::isfinite(cutoff)) v *= std::exp(-0.5 * nu * nu / (cutoff * cutoff));
      return v;
    }
    case Kind::ohmic: {
      const double x = beta * nu;
      double v = std::abs(x) < 1e-12 ? strength / beta * (1.0 + 0.5 * x) : strength * nu / -std::expm1(-x);
      if (std::isfinite(cutoff)) v *= std::exp(-std::abs(nu) / cutoff);
      return v;
    }
    case Kind::table: {
      if (!in_support(nu)) throw ConfigError("spectral table: nu = " + std::to_string(nu) + " outside support");
      auto it = std::upper_bound(table_nu.begin(), table_nu.end(), nu);
      std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - table_nu.begin()), table_nu.size() - 1);
      std::size_t lo = hi - 1;
      const double s = (nu - table_nu[lo]) / (table_nu[hi] - table_nu[lo]);
      return std::exp((1.0 - s) * std::log(table_value[lo]) + s * std::log(table_value[hi]));
    }
  }
  return 0.0;
}

double kms_residual(const SpectralFunction& spec, double beta, const std::vector<double>& nu_samples) {
  double worst = 0.0;
  for (double nu : nu_samples) {
    if (!spec.in_support(nu) || !spec.in_support(-nu)) continue;
    const double h = spec(nu, beta);
    const double hm = spec(-nu, beta);
    if (!(h > 0.0)) throw SpectralError("spectral function is not positive at nu = " + std::to_string(nu), h);
    if (!(hm > 0.0)) throw SpectralError("spectral function is not positive at nu = " + std::to_string(-nu), hm);
    worst = std::max(worst, std::abs(h - std::exp(beta * nu) * hm) / h);
  }
  return worst;
}

std::string to_string(CouplingScheme::Kind kind) {
  switch (kind) {
    case CouplingScheme::Kind::davies: return "davies";
    case CouplingScheme::Kind::gaussian: return "gaussian";
    case CouplingScheme::Kind::single_q: return "single_q";
  }
  return "?";
}

// --- system model ---------------------------------------------------------------

void SystemModel::validate() const {
  if (hamiltonian.rows() < 2) throw ConfigError("model: dimension must be at least 2");
  require_hermitian(hamiltonian, hamiltonian.rows(), "model.hamiltonian");
  if (baths.empty()) throw ConfigError("model: at least one bath is required");
  const std::vector<double> bohr = bohr_sample_set(hamiltonian);
  for (std::size_t j = 0; j < baths.size(); ++j) {
    const BathSpec& b = baths[j];
    const std::string where = "model.baths[" + std::to_string(j) + "]";
    if (!(b.beta > 0.0) || !std::isfinite(b.beta)) throw ConfigError(where + ".beta must be finite and positive");
    require_hermitian(b.coupling, dim(), where + ".coupling");
    if (b.scheme.kind == CouplingScheme::Kind::gaussian) {
      if (!(b.scheme.collision_time > 0.0) || !std::isfinite(b.scheme.collision_time))
        throw ConfigError(where + ".scheme.T must satisfy 0 < T < inf");
      if (!(b.scheme.grid.half_width_factor > 0.0) || b.scheme.grid.points_per_peak < 1)
        throw ConfigError(where + ".scheme grid needs half_width_factor > 0 and points_per_peak >= 1");
    }
    std::vector<double> samples = bohr;
    if (b.spectral.kind == SpectralFunction::Kind::table) {
      for (double nu : bohr)
        if (!b.spectral.in_support(nu))
          throw ConfigError(where + ".spectral: table does not cover Bohr frequency " + std::to_string(nu));
      samples.insert(samples.end(), b.spectral.table_nu.begin(), b.spectral.table_nu.end());
    }
    const double res = kms_residual(b.spectral, b.beta, samples);
    if (res > kKmsTol)
      throw SpectralError(where + ".spectral violates KMS at beta = " + std::to_string(b.beta) +
                              " (relative residual " + std::to_string(res) + ")",
                          res);
  }
}

SystemModel SystemModel::at_common_beta(double beta) const {
  SystemModel out = *this;
  for (auto& b : out.baths) b.beta = beta;
  return out;
}

// --- coupling operators ---------------------------------------------------------

Matrix CouplingFamily::coupling_operator(std::size_t index, double lambda) const {
  const BracketChannel& ch = channels.at(index);
  Matrix q = Matrix::Zero(ch.terms.front().op.rows(), ch.terms.front().op.cols());
  for (const auto& t : ch.terms) q += std::exp(-0.5 * lambda * beta * t.nu) * std::sqrt(t.weight) * t.op;
  return q;
}

std::size_t CouplingFamily::term_count() const {
  std::size_t n = 0;
  for (const auto& c : channels) n += c.terms.size();
  return n;
}

std::vector<BohrComponent> bohr_decompose(const Matrix& hamiltonian, const Matrix& coupling) {
  return bohr_decompose(herm_eig(hamiltonian), coupling);
}

std::vector<BohrComponent> bohr_decompose(const EigenSystem& h_eig, const Matrix& coupling) {
  const Eigen::Index d = h_eig.dim();
  if (coupling.rows() != d || coupling.cols() != d) throw InputError("bohr_decompose: dimension mismatch");
  const Matrix r = h_eig.basis.adjoint() * coupling * h_eig.basis;
  const double range = h_eig.values(d - 1) - h_eig.values(0);
  const double tol = kMergeTol * (range > 0.0 ? range : 1.0);

  // Cluster |omega| greedily from below; each cluster maps to +nu and -nu, so the
  // decomposition is exactly symmetric under adjoint.
  struct Pair {
    Eigen::Index m, n;
    double omega;
  };
  std::vector<Pair> pairs;
  for (Eigen::Index m = 0; m < d; ++m)
    for (Eigen::Index n = 0; n < d; ++n) pairs.push_back({m, n, h_eig.values(n) - h_eig.values(m)});
  std::vector<double> mags;
  for (const auto& p : pairs) mags.push_back(std::abs(p.omega));
  std::sort(mags.begin(), mags.end());
  std::vector<double> starts;
  std::vector<double> means;
  std::vector<int> counts;
  for (double x : mags) {
    if (starts.empty() || x - starts.back() > tol) {
      starts.push_back(x);
      means.push_back(0.0);
      counts.push_back(0);
    }
    means.back() += x;
    counts.back() += 1;
  }
  for (std::size_t c = 0; c < means.size(); ++c) means[c] /= counts[c];
  if (!starts.empty() && starts.front() <= tol) means.front() = 0.0;

  auto cluster_of = [&](double mag) {
    auto it = std::upper_bound(starts.begin(), starts.end(), mag);
    return static_cast<std::size_t>(it - starts.begin()) - 1;
  };

  const double scale = std::max(1.0, max_norm(coupling));
  std::vector<BohrComponent> out;
  for (std::size_t c = 0; c < means.size(); ++c) {
    for (int sign : {-1, 1}) {
      if (means[c] == 0.0 && sign == 1) continue;
      const double nu = sign * means[c];
      Matrix a = Matrix::Zero(d, d);
      for (const auto& p : pairs) {
        if (cluster_of(std::abs(p.omega)) != c) continue;
        const bool positive = p.omega > 0.0;
        if (means[c] != 0.0 && positive != (sign == 1)) continue;
        a(p.m, p.n) = r(p.m, p.n);
      }
      if (max_norm(a) <= 1e-14 * scale) continue;
      out.push_back({nu, h_eig.basis * a * h_eig.basis.adjoint()});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.nu < y.nu; });
  return out;
}

double gaussian_window_constant(double collision_time) {
  return std::pow(8.0 * std::numbers::pi, 0.25) * std::sqrt(collision_time);
}

Matrix gaussian_window_op(const Matrix& hamiltonian, const Matrix& coupling, double collision_time, double nu) {
  return gaussian_window_op(herm_eig(hamiltonian), coupling, collision_time, nu);
}

Matrix gaussian_window_op(const EigenSystem& h_eig, const Matrix& coupling, double collision_time, double nu) {
  if (!(collision_time > 0.0)) throw InputError("gaussian_window_op: T must be positive");
  const Eigen::Index d = h_eig.dim();
  const Matrix r = h_eig.basis.adjoint() * coupling * h_eig.basis;
  const double c = gaussian_window_constant(collision_time);
  const double t2 = collision_time * collision_time;
  Matrix a(d, d);
  for (Eigen::Index m = 0; m < d; ++m)
    for (Eigen::Index n = 0; n < d; ++n) {
      const double detune = nu - (h_eig.values(n) - h_eig.values(m));
      a(m, n) = c * r(m, n) * std::exp(-t2 * detune * detune);
    }
  return h_eig.basis * a * h_eig.basis.adjoint();
}

FrequencyGrid gaussian_frequency_grid(const std::vector<double>& bohr_frequencies, double collision_time,
                                      const GridSpec& grid) {
  if (!(collision_time > 0.0) || !(grid.half_width_factor > 0.0) || grid.points_per_peak < 1)
    throw ConfigError("frequency grid: need T > 0, half_width_factor > 0, points_per_peak >= 1");
  const double half = grid.half_width_factor / collision_time;
  std::vector<std::pair<double, double>> intervals;
  for (double w : bohr_frequencies) {
    const double a = std::abs(w);
    intervals.emplace_back(std::max(0.0, a - half), a + half);
  }
  std::sort(intervals.begin(), intervals.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, iv.second);
    else
      merged.push_back(iv);
  }
  // Panels no wider than the half width, so every peak window holds a full panel.
  std::vector<std::pair<double, double>> positive;
  for (const auto& [a, b] : merged) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / half - 1e-12)));
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const QuadratureRule rule = gauss_legendre(grid.points_per_peak, a + p * width, a + (p + 1) * width);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) positive.emplace_back(rule.nodes[i], rule.weights[i]);
    }
  }
  FrequencyGrid out;
  std::vector<std::pair<double, double>> all;
  for (const auto& [x, w] : positive) {
    all.emplace_back(x, w);
    all.emplace_back(-x, w);
  }
  std::sort(all.begin(), all.end());
  for (const auto& [x, w] : all) {
    out.nodes.push_back(x);
    out.weights.push_back(w);
  }
  for (double w : bohr_frequencies) {
    const auto count = std::count_if(out.nodes.begin(), out.nodes.end(),
                                     [&](double x) { return std::abs(x - w) <= half * (1.0 + 1e-12); });
    if (count < grid.points_per_peak)
      throw ConfigError("frequency grid does not cover Bohr frequency " + std::to_string(w));
  }
  return out;
}

CouplingFamily build_coupling_family(const BathSpec& bath, const Matrix& hamiltonian) {
  const EigenSystem h_eig = herm_eig(hamiltonian);
  const std::vector<BohrComponent> comps = bohr_decompose(h_eig, bath.coupling);
  CouplingFamily fam;
  fam.beta = bath.beta;
  fam.scheme = bath.scheme.kind;
  switch (bath.scheme.kind) {
    case CouplingScheme::Kind::davies:
      for (const auto& c : comps) fam.channels.push_back({{{c.op, c.nu, bath.spectral(c.nu, bath.beta)}}, 1.0});
      break;
    case CouplingScheme::Kind::single_q: {
      if (comps.empty()) break;
      BracketChannel ch;
      for (const auto& c : comps) ch.terms.push_back({c.op, c.nu, bath.spectral(c.nu, bath.beta)});
      fam.channels.push_back(std::move(ch));
      break;
    }
    case CouplingScheme::Kind::gaussian: {
      if (comps.empty()) break;
      std::vector<double> centers;
      for (const auto& c : comps) centers.push_back(c.nu);
      const double T = bath.scheme.collision_time;
      const FrequencyGrid grid = gaussian_frequency_grid(centers, T, bath.scheme.grid);
      for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const double nu = grid.nodes[i];
        fam.channels.push_back({{{gaussian_window_op(h_eig, bath.coupling, T, nu), nu, bath.spectral(nu, bath.beta)}},
                                grid.weights[i] / (2.0 * std::numbers::pi)});
      }
      break;
    }
  }
  return fam;
}

double adjoint_closure_residual(const CouplingFamily& family) {
  double worst = 0.0;
  auto term_residual = [](const ChannelTerm& t, const ChannelTerm& p) {
    return std::max(std::abs(t.nu + p.nu), max_norm(p.op - t.op.adjoint()));
  };
  for (std::size_t a = 0; a < family.channels.size(); ++a) {
    const BracketChannel& ch = family.channels[a];
    if (ch.terms.size() == 1) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& other : family.channels) {
        if (other.terms.size() != 1) continue;
        double r = term_residual(ch.terms.front(), other.terms.front());
        r = std::max(r, std::abs(other.quad_weight - ch.quad_weight));
        best = std::min(best, r);
      }
      worst = std::max(worst, best);
    } else {
      for (const auto& t : ch.terms) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : ch.terms) best = std::min(best, term_residual(t, p));
        worst = std::max(worst, best);
      }
    }
  }
  return worst;
}

ErgodicityReport ergodicity_check(const Matrix& hamiltonian, const CouplingFamily& family) {
  std::vector<Matrix> ops;
  for (const auto& ch : family.channels)
    for (const auto& t : ch.terms) ops.push_back(t.op);
  return ergodicity_check(hamiltonian, ops);
}

ErgodicityReport ergodicity_check(const Matrix& hamiltonian, const std::vector<Matrix>& operators) {
  const Eigen::Index d = hamiltonian.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix gram = Matrix::Zero(d * d, d * d);
  auto add = [&](const Matrix& x) {
    const double s = max_norm(x);
    if (s == 0.0) return;
    const Matrix xs = x / s;
    const Matrix c = kron(id, xs) - kron(xs.transpose(), id);
    gram += c.adjoint() * c;
  };
  add(hamiltonian);
  for (const auto& op : operators) {
    add(op);
    add(op.adjoint());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  const double top = std::max(es.eigenvalues().maxCoeff(), 1e-300);
  Eigen::Index kernel = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) <= 1e-10 * top) ++kernel;
  return {kernel == 1, kernel};
}

}  // namespace mds
