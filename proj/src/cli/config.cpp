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

#include "mdslab/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mds::cli {

using nlohmann::json;

ConfigViolations::ConfigViolations(std::vector<std::string> violations)
    : ConfigError([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) return;
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
      if (!ok.count(k)) fail(join(path, k), "unknown key");
  }

  const json* child(const json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }

  double number(const json& j, const std::string& path, const std::string& key, std::optional<double> def) {
    const json* v = child(j, key);
    if (!v) {
      if (!def) fail(join(path, key), "required number is missing");
      return def.value_or(0.0);
    }
    if (!v->is_number()) {
      fail(join(path, key), "expected a number");
      return def.value_or(0.0);
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(join(path, key), "must be finite");
    return x;
  }

  double positive(const json& j, const std::string& path, const std::string& key, std::optional<double> def) {
    const double x = number(j, path, key, def);
    if (child(j, key) && !(x > 0.0)) fail(join(path, key), "must be positive, got " + std::to_string(x));
    return x;
  }

  long integer(const json& j, const std::string& path, const std::string& key, std::optional<long> def,
               long min_value) {
    const json* v = child(j, key);
    if (!v) {
      if (!def) fail(join(path, key), "required integer is missing");
      return def.value_or(min_value);
    }
    if (!v->is_number_integer()) {
      fail(join(path, key), "expected an integer");
      return def.value_or(min_value);
    }
    const long x = v->get<long>();
    if (x < min_value) fail(join(path, key), "must be >= " + std::to_string(min_value));
    return x;
  }

  std::string string(const json& j, const std::string& path, const std::string& key,
                     std::optional<std::string> def) {
    const json* v = child(j, key);
    if (!v) {
      if (!def) fail(join(path, key), "required string is missing");
      return def.value_or("");
    }
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return def.value_or("");
    }
    return v->get<std::string>();
  }

  std::vector<double> numbers(const json& j, const std::string& path) {
    std::vector<double> out;
    if (!j.is_array()) {
      fail(path, "expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) {
        fail(index(path, i), "expected a number");
        continue;
      }
      out.push_back(j[i].get<double>());
    }
    return out;
  }

  std::optional<RealMatrix> real_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
      fail(path, "expected a non-empty array of rows");
      return std::nullopt;
    }
    const std::size_t n = j.size();
    RealMatrix m = RealMatrix::Zero(n, n);
    bool ok = true;
    for (std::size_t r = 0; r < n; ++r) {
      const std::vector<double> row = numbers(j[r], index(path, r));
      if (row.size() != n) {
        fail(index(path, r), "row has " + std::to_string(row.size()) + " entries, matrix is " + std::to_string(n) +
                                 "x" + std::to_string(n));
        ok = false;
        continue;
      }
      for (std::size_t c = 0; c < n; ++c) m(r, c) = row[c];
    }
    if (!ok) return std::nullopt;
    return m;
  }

  // {"real": [[...]], "imag": [[...]]}
  std::optional<Matrix> complex_matrix(const json& j, const std::string& path) {
    if (!object(j, path)) return std::nullopt;
    keys(j, path, {"real", "imag"});
    const json* re = child(j, "real");
    if (!re) {
      fail(join(path, "real"), "required matrix is missing");
      return std::nullopt;
    }
    auto real = real_matrix(*re, join(path, "real"));
    if (!real) return std::nullopt;
    Matrix m = real->cast<cplx>();
    if (const json* im = child(j, "imag")) {
      auto imag = real_matrix(*im, join(path, "imag"));
      if (!imag) return std::nullopt;
      if (imag->rows() != real->rows()) {
        fail(join(path, "imag"), "is " + std::to_string(imag->rows()) + "x" + std::to_string(imag->rows()) +
                                     " but " + join(path, "real") + " is " + std::to_string(real->rows()) + "x" +
                                     std::to_string(real->rows()));
        return std::nullopt;
      }
      m += kI * imag->cast<cplx>();
    }
    return m;
  }
};

RealMatrix random_symmetric(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RealMatrix m(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) m(r, c) = g(rng);
  return 0.5 * (m + m.transpose());
}

Matrix random_hermitian(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) m(r, c) = cplx(g(rng), g(rng));
  return hermitize(m);
}

std::optional<Matrix> parse_hamiltonian(Reader& rd, const json& j, const std::string& path, std::uint64_t seed) {
  if (!rd.object(j, path)) return std::nullopt;
  if (rd.child(j, "matrix")) {
    rd.keys(j, path, {"matrix"});
    return rd.complex_matrix(*rd.child(j, "matrix"), join(path, "matrix"));
  }
  const std::string preset = rd.string(j, path, "preset", std::nullopt);
  if (preset == "qubit") {
    rd.keys(j, path, {"preset", "energy"});
    const double e = rd.positive(j, path, "energy", 1.0);
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = e;
    return h;
  }
  if (preset == "oscillator") {
    rd.keys(j, path, {"preset", "n_levels", "omega"});
    const long n = rd.integer(j, path, "n_levels", 4, 2);
    const double w = rd.positive(j, path, "omega", 1.0);
    Matrix h = Matrix::Zero(n, n);
    for (long k = 0; k < n; ++k) h(k, k) = w * double(k);
    return h;
  }
  if (preset == "random") {
    rd.keys(j, path, {"preset", "dim", "seed", "scale"});
    const long d = rd.integer(j, path, "dim", 3, 1);
    const long s = rd.integer(j, path, "seed", long(seed & 0x7fffffffffffffff), 0);
    const double scale = rd.positive(j, path, "scale", 1.0);
    return Matrix((scale * random_symmetric(d, std::uint64_t(s))).cast<cplx>());
  }
  if (!preset.empty()) rd.fail(join(path, "preset"), "unknown preset '" + preset + "' (qubit, oscillator, random)");
  return std::nullopt;
}

std::optional<Matrix> parse_coupling(Reader& rd, const json& j, const std::string& path, Eigen::Index d,
                                     std::uint64_t seed) {
  if (!rd.object(j, path)) return std::nullopt;
  if (rd.child(j, "matrix")) {
    rd.keys(j, path, {"matrix"});
    return rd.complex_matrix(*rd.child(j, "matrix"), join(path, "matrix"));
  }
  const std::string preset = rd.string(j, path, "preset", std::nullopt);
  const double scale = rd.positive(j, path, "scale", 1.0);
  Matrix r = Matrix::Zero(d, d);
  if (preset == "sigma_x" || preset == "sigma_y" || preset == "sigma_z") {
    rd.keys(j, path, {"preset", "scale"});
    if (d != 2) {
      rd.fail(join(path, "preset"), preset + " needs a 2-level system, model.hamiltonian is " + std::to_string(d) +
                                        "x" + std::to_string(d));
      return std::nullopt;
    }
    if (preset == "sigma_x") r << 0, 1, 1, 0;
    if (preset == "sigma_y") r << 0, -kI, kI, 0;
    if (preset == "sigma_z") r << 1, 0, 0, -1;
  } else if (preset == "position") {
    rd.keys(j, path, {"preset", "scale"});
    for (Eigen::Index k = 0; k + 1 < d; ++k) r(k, k + 1) = r(k + 1, k) = std::sqrt(double(k + 1));
  } else if (preset == "number") {
    rd.keys(j, path, {"preset", "scale"});
    for (Eigen::Index k = 0; k < d; ++k) r(k, k) = double(k);
  } else if (preset == "random") {
    rd.keys(j, path, {"preset", "scale", "seed"});
    const long s = rd.integer(j, path, "seed", long((seed + 1) & 0x7fffffffffffffff), 0);
    r = random_hermitian(d, std::uint64_t(s));
  } else {
    if (!preset.empty())
      rd.fail(join(path, "preset"),
              "unknown preset '" + preset + "' (sigma_x, sigma_y, sigma_z, position, number, random)");
    return std::nullopt;
  }
  return Matrix(scale * r);
}

std::optional<SpectralFunction> parse_spectral(Reader& rd, const json& j, const std::string& path) {
  if (!rd.object(j, path)) return std::nullopt;
  const std::string kind = rd.string(j, path, "kind", std::nullopt);
  if (kind == "ohmic" || kind == "gibbs_exponential") {
    rd.keys(j, path, {"kind", "strength", "cutoff"});
    const double g = rd.positive(j, path, "strength", 1.0);
    const double c = rd.positive(j, path, "cutoff", std::numeric_limits<double>::infinity());
    return kind == "ohmic" ? SpectralFunction::ohmic(g, c) : SpectralFunction::gibbs_exponential(g, c);
  }
  if (kind == "table") {
    rd.keys(j, path, {"kind", "nu", "value"});
    const json* nu = rd.child(j, "nu");
    const json* val = rd.child(j, "value");
    if (!nu || !val) {
      rd.fail(path, "table spectral function needs 'nu' and 'value'");
      return std::nullopt;
    }
    auto x = rd.numbers(*nu, join(path, "nu"));
    auto y = rd.numbers(*val, join(path, "value"));
    if (x.size() != y.size() || x.size() < 2) {
      rd.fail(path, "'nu' has " + std::to_string(x.size()) + " entries and 'value' has " +
                        std::to_string(y.size()) + "; need equal lengths >= 2");
      return std::nullopt;
    }
    try {
      return SpectralFunction::table(std::move(x), std::move(y));
    } catch (const std::exception& e) {
      rd.fail(path, e.what());
      return std::nullopt;
    }
  }
  if (!kind.empty()) rd.fail(join(path, "kind"), "unknown kind '" + kind + "' (ohmic, gibbs_exponential, table)");
  return std::nullopt;
}

CouplingScheme parse_scheme(Reader& rd, const json& j, const std::string& path) {
  if (!rd.object(j, path)) return {};
  const std::string kind = rd.string(j, path, "kind", std::nullopt);
  if (kind == "davies") {
    rd.keys(j, path, {"kind"});
    return CouplingScheme::davies();
  }
  if (kind == "single_q") {
    rd.keys(j, path, {"kind"});
    return CouplingScheme::single_q();
  }
  if (kind == "gaussian") {
    rd.keys(j, path, {"kind", "collision_time", "grid"});
    const double t = rd.positive(j, path, "collision_time", std::nullopt);
    GridSpec grid;
    if (const json* g = rd.child(j, "grid")) {
      const std::string gp = join(path, "grid");
      if (rd.object(*g, gp)) {
        rd.keys(*g, gp, {"half_width_factor", "points_per_peak"});
        grid.half_width_factor = rd.positive(*g, gp, "half_width_factor", grid.half_width_factor);
        grid.points_per_peak = int(rd.integer(*g, gp, "points_per_peak", grid.points_per_peak, 1));
      }
    }
    return CouplingScheme::gaussian(t, grid);
  }
  if (!kind.empty()) rd.fail(join(path, "kind"), "unknown kind '" + kind + "' (davies, gaussian, single_q)");
  return {};
}

InitialStateSpec parse_initial(Reader& rd, const json& j, const std::string& path, Eigen::Index d) {
  InitialStateSpec s;
  if (!rd.object(j, path)) return s;
  const std::string preset = rd.string(j, path, "preset", std::nullopt);
  if (preset == "gibbs") {
    rd.keys(j, path, {"preset", "beta"});
    s.kind = InitialStateSpec::Kind::gibbs;
    s.beta = rd.number(j, path, "beta", std::nullopt);
    if (s.beta < 0.0) rd.fail(join(path, "beta"), "must be >= 0");
  } else if (preset == "diagonal") {
    rd.keys(j, path, {"preset", "p"});
    s.kind = InitialStateSpec::Kind::diagonal;
    if (const json* p = rd.child(j, "p")) {
      s.diagonal = rd.numbers(*p, join(path, "p"));
      if (d > 0 && Eigen::Index(s.diagonal.size()) != d)
        rd.fail(join(path, "p"), "has " + std::to_string(s.diagonal.size()) + " entries but model.hamiltonian is " +
                                     std::to_string(d) + "x" + std::to_string(d));
      for (std::size_t i = 0; i < s.diagonal.size(); ++i)
        if (!(s.diagonal[i] > 0.0)) rd.fail(index(join(path, "p"), i), "populations must be strictly positive");
    } else {
      rd.fail(join(path, "p"), "required array is missing");
    }
  } else if (preset == "pure_excited") {
    rd.keys(j, path, {"preset"});
    s.kind = InitialStateSpec::Kind::pure_excited;
  } else if (preset == "matrix") {
    rd.keys(j, path, {"preset", "real", "imag"});
    s.kind = InitialStateSpec::Kind::matrix;
    json m = json::object();
    if (const json* re = rd.child(j, "real")) m["real"] = *re;
    if (const json* im = rd.child(j, "imag")) m["imag"] = *im;
    if (auto mat = rd.complex_matrix(m, path)) {
      s.matrix = *mat;
      if (d > 0 && mat->rows() != d)
        rd.fail(join(path, "real"), "is " + std::to_string(mat->rows()) + "x" + std::to_string(mat->rows()) +
                                        " but model.hamiltonian is " + std::to_string(d) + "x" + std::to_string(d));
    }
  } else if (!preset.empty()) {
    rd.fail(join(path, "preset"), "unknown preset '" + preset + "' (gibbs, diagonal, pure_excited, matrix)");
  }
  return s;
}

void parse_integrator(Reader& rd, const json& j, const std::string& path, IntegratorOptions& o) {
  if (!rd.object(j, path)) return;
  rd.keys(j, path, {"rel_tol", "abs_tol", "initial_step", "max_step", "positivity_floor", "max_retries", "max_steps"});
  o.rel_tol = rd.positive(j, path, "rel_tol", o.rel_tol);
  o.abs_tol = rd.positive(j, path, "abs_tol", o.abs_tol);
  o.initial_step = rd.positive(j, path, "initial_step", o.initial_step);
  o.max_step = rd.positive(j, path, "max_step", o.max_step);
  o.positivity_floor = rd.positive(j, path, "positivity_floor", o.positivity_floor);
  o.max_retries = int(rd.integer(j, path, "max_retries", o.max_retries, 1));
  o.max_steps = rd.integer(j, path, "max_steps", o.max_steps, 1);
}

void parse_steady(Reader& rd, const json& j, const std::string& path, SteadyStateOptions& o) {
  if (!rd.object(j, path)) return;
  rd.keys(j, path, {"chunk", "max_time", "switch_tolerance", "rhs_tolerance", "step_tolerance", "max_newton"});
  o.chunk = rd.positive(j, path, "chunk", o.chunk);
  o.max_time = rd.positive(j, path, "max_time", o.max_time);
  o.switch_tolerance = rd.positive(j, path, "switch_tolerance", o.switch_tolerance);
  o.rhs_tolerance = rd.positive(j, path, "rhs_tolerance", o.rhs_tolerance);
  o.step_tolerance = rd.positive(j, path, "step_tolerance", o.step_tolerance);
  o.max_newton = int(rd.integer(j, path, "max_newton", o.max_newton, 1));
}

void parse_run(Reader& rd, const json& j, const std::string& path, RunSpec& run, Eigen::Index d) {
  if (!rd.object(j, path)) return;
  rd.keys(j, path, {"t_span", "samples", "initial_state", "integrator", "steady", "onsager", "quadrature_nodes",
                    "verify"});
  if (const json* ts = rd.child(j, "t_span")) {
    auto v = rd.numbers(*ts, join(path, "t_span"));
    if (v.size() != 2)
      rd.fail(join(path, "t_span"), "expected [t0, t1]");
    else if (!(v[1] > v[0]))
      rd.fail(join(path, "t_span"), "t1 must exceed t0");
    else {
      run.t0 = v[0];
      run.t1 = v[1];
    }
  }
  run.samples = int(rd.integer(j, path, "samples", run.samples, 2));
  run.quadrature_nodes = int(rd.integer(j, path, "quadrature_nodes", run.quadrature_nodes, 2));
  if (const json* s = rd.child(j, "initial_state")) run.initial = parse_initial(rd, *s, join(path, "initial_state"), d);
  if (const json* s = rd.child(j, "integrator")) parse_integrator(rd, *s, join(path, "integrator"), run.integrator);
  run.steady.integrator = run.integrator;
  if (const json* s = rd.child(j, "steady")) parse_steady(rd, *s, join(path, "steady"), run.steady);
  if (const json* s = rd.child(j, "onsager")) {
    const std::string op = join(path, "onsager");
    if (rd.object(*s, op)) {
      rd.keys(*s, op, {"beta", "dx"});
      if (rd.child(*s, "beta")) run.onsager.beta = rd.positive(*s, op, "beta", std::nullopt);
      run.onsager.dx = rd.positive(*s, op, "dx", run.onsager.dx);
    }
  }
  if (const json* s = rd.child(j, "verify")) {
    const std::string vp = join(path, "verify");
    if (rd.object(*s, vp)) {
      rd.keys(*s, vp, {"collision_time"});
      if (rd.child(*s, "collision_time")) run.verify_collision_time = rd.positive(*s, vp, "collision_time", 1.0);
    }
  }
}

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

double ScenarioConfig::reference_beta() const { return model.baths.empty() ? 1.0 : model.baths.front().beta; }

double ScenarioConfig::reference_energy() const {
  const RealVector e = herm_eig(model.hamiltonian).values;
  const double range = e.maxCoeff() - e.minCoeff();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < e.size(); ++a)
    for (Eigen::Index b = a + 1; b < e.size(); ++b) {
      const double gap = std::abs(e(b) - e(a));
      if (gap > 1e-9 * range) best = std::min(best, gap);
    }
  return std::isfinite(best) ? best : 1.0;
}

ScenarioConfig parse_config_text(const std::string& text, std::optional<std::uint64_t> seed_override) {
  json root;
  try {
    root = json::parse(text, nullptr, true, false);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Reader rd;
  ScenarioConfig cfg;
  if (!rd.object(root, "$")) throw ConfigViolations(rd.errors);
  rd.keys(root, "", {"schema_version", "seed", "model", "run", "output"});
  cfg.schema_version = int(rd.integer(root, "", "schema_version", std::nullopt, 0));
  if (rd.child(root, "schema_version") && cfg.schema_version != kSchemaVersion)
    rd.fail("schema_version", "unsupported version " + std::to_string(cfg.schema_version) + " (expected " +
                                  std::to_string(kSchemaVersion) + ")");
  if (const json* s = rd.child(root, "seed")) {
    if (s->is_number_unsigned())
      cfg.seed = s->get<std::uint64_t>();
    else if (s->is_number_integer() && s->get<long>() >= 0)
      cfg.seed = std::uint64_t(s->get<long>());
    else
      rd.fail("seed", "expected a non-negative integer");
  }
  if (seed_override) cfg.seed = *seed_override;

  Eigen::Index d = 0;
  const json* model = rd.child(root, "model");
  if (!model) {
    rd.fail("model", "required object is missing");
  } else if (rd.object(*model, "model")) {
    rd.keys(*model, "model", {"hamiltonian", "baths"});
    if (const json* h = rd.child(*model, "hamiltonian")) {
      if (auto hm = parse_hamiltonian(rd, *h, "model.hamiltonian", cfg.seed)) {
        cfg.model.hamiltonian = *hm;
        d = hm->rows();
        if (hermiticity_residual(*hm) > kHermitianTol) rd.fail("model.hamiltonian", "matrix is not Hermitian");
      }
    } else {
      rd.fail("model.hamiltonian", "required object is missing");
    }
    const json* baths = rd.child(*model, "baths");
    if (!baths || !baths->is_array() || baths->empty()) {
      rd.fail("model.baths", "expected a non-empty array of baths");
    } else {
      for (std::size_t i = 0; i < baths->size(); ++i) {
        const std::string bp = index("model.baths", i);
        const json& b = (*baths)[i];
        if (!rd.object(b, bp)) continue;
        rd.keys(b, bp, {"beta", "spectral", "coupling", "scheme"});
        BathSpec bath;
        bool ok = true;
        bath.beta = rd.positive(b, bp, "beta", std::nullopt);
        if (const json* s = rd.child(b, "spectral")) {
          auto sp = parse_spectral(rd, *s, join(bp, "spectral"));
          ok = ok && sp.has_value();
          if (sp) bath.spectral = *sp;
        } else {
          rd.fail(join(bp, "spectral"), "required object is missing");
          ok = false;
        }
        if (const json* c = rd.child(b, "coupling")) {
          auto r = d > 0 ? parse_coupling(rd, *c, join(bp, "coupling"), d, cfg.seed + i) : std::nullopt;
          ok = ok && r.has_value();
          if (r) {
            bath.coupling = *r;
            if (r->rows() != d) {
              rd.fail(join(bp, "coupling"), "is " + shape(*r) + " but model.hamiltonian is " +
                                                shape(cfg.model.hamiltonian));
              ok = false;
            } else if (hermiticity_residual(*r) > kHermitianTol) {
              rd.fail(join(bp, "coupling"), "matrix is not Hermitian");
              ok = false;
            }
          }
        } else {
          rd.fail(join(bp, "coupling"), "required object is missing");
          ok = false;
        }
        if (const json* s = rd.child(b, "scheme"))
          bath.scheme = parse_scheme(rd, *s, join(bp, "scheme"));
        cfg.model.baths.push_back(bath);
        if (ok && d > 0 && bath.beta > 0.0) {
          try {
            SystemModel{cfg.model.hamiltonian, {bath}}.validate();
          } catch (const SpectralError& e) {
            rd.fail(bp, std::string(e.what()) + " (KMS residual " + std::to_string(e.residual()) + ")");
          } catch (const std::exception& e) {
            rd.fail(bp, e.what());
          }
        }
      }
    }
  }
  if (const json* run = rd.child(root, "run")) parse_run(rd, *run, "run", cfg.run, d);
  else cfg.run.steady.integrator = cfg.run.integrator;
  if (const json* out = rd.child(root, "output")) {
    if (rd.object(*out, "output")) {
      rd.keys(*out, "output", {"dir", "stride", "write_state"});
      cfg.output.dir = rd.string(*out, "output", "dir", cfg.output.dir.string());
      cfg.output.stride = int(rd.integer(*out, "output", "stride", cfg.output.stride, 1));
      if (const json* w = rd.child(*out, "write_state")) {
        if (w->is_boolean()) cfg.output.write_state = w->get<bool>();
        else rd.fail("output.write_state", "expected a boolean");
      }
    }
  }
  if (!rd.errors.empty()) throw ConfigViolations(rd.errors);
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), seed_override);
}

QuantumState make_initial_state(const ScenarioConfig& cfg) {
  const Matrix& h = cfg.model.hamiltonian;
  const Eigen::Index d = h.rows();
  const InitialStateSpec& s = cfg.run.initial;
  switch (s.kind) {
    case InitialStateSpec::Kind::gibbs:
      return gibbs_state(h, s.beta);
    case InitialStateSpec::Kind::diagonal: {
      const EigenSystem eig = herm_eig(h);
      RealVector p = Eigen::Map<const RealVector>(s.diagonal.data(), Eigen::Index(s.diagonal.size()));
      return QuantumState::normalized(eig.reconstruct(p));
    }
    case InitialStateSpec::Kind::pure_excited: {
      const EigenSystem eig = herm_eig(h);
      const Vector top = eig.basis.col(d - 1);
      const Matrix mixed = (1.0 - kPureExcitedMixing) * top * top.adjoint() +
                           (kPureExcitedMixing / double(d)) * Matrix::Identity(d, d);
      return QuantumState::normalized(mixed);
    }
    case InitialStateSpec::Kind::matrix:
      return QuantumState(s.matrix);
  }
  throw ConfigError("unknown initial state");
}

}  // namespace mds::cli
