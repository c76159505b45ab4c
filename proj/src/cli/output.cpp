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

#include "mdslab/cli/output.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "mdslab/errors.hpp"

namespace mds::cli {

Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json real_matrix_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json matrix_json(const Matrix& m) {
  Json out;
  out["real"] = real_matrix_json(m.real());
  out["imag"] = real_matrix_json(m.imag());
  return out;
}

Json complex_list_json(const std::vector<cplx>& values) {
  Json out = Json::array();
  for (const cplx& v : values) out.push_back(Json::array({number_json(v.real()), number_json(v.imag())}));
  return out;
}

void write_json(const std::filesystem::path& path, const std::string& kind, Json body) {
  Json doc;
  doc["schema_version"] = kOutputSchemaVersion;
  doc["kind"] = kind;
  for (auto& [k, v] : body.items()) doc[k] = std::move(v);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::vector<std::string> trajectory_columns(std::size_t baths, Eigen::Index dim, bool with_state) {
  std::vector<std::string> cols = {"t", "energy", "entropy", "sigma_total"};
  for (std::size_t j = 0; j < baths; ++j) cols.push_back(fmt::format("sigma_{}", j + 1));
  for (std::size_t j = 0; j < baths; ++j) cols.push_back(fmt::format("flux_{}", j + 1));
  for (const char* c : {"rel_entropy_to_gibbs", "min_eig", "trace_drift"}) cols.emplace_back(c);
  if (with_state)
    for (Eigen::Index c = 0; c < dim; ++c)
      for (Eigen::Index r = 0; r < dim; ++r) {
        cols.push_back(fmt::format("re_rho_{}_{}", r, c));
        cols.push_back(fmt::format("im_rho_{}_{}", r, c));
      }
  return cols;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, std::size_t baths,
                          int stride, bool with_state) {
  if (traj.observables.size() != traj.states.size())
    throw InputError("write_trajectory_csv: trajectory has no observables");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const Eigen::Index dim = traj.states.empty() ? 0 : traj.states.front().dim();
  out << "# schema_version=" << kOutputSchemaVersion << "\r\n";
  const auto cols = trajectory_columns(baths, dim, with_state);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\r\n";
  auto num = [](double x) { return fmt::format("{:.17g}", x); };
  const std::size_t n = traj.states.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % std::size_t(stride) != 0 && i + 1 != n) continue;
    const ObservableRecord& o = traj.observables[i];
    std::string line = num(o.time) + "," + num(o.energy) + "," + num(o.entropy) + "," + num(o.sigma_total);
    for (double s : o.sigma) line += "," + num(s);
    for (double f : o.flux) line += "," + num(f);
    line += "," + num(o.rel_entropy_to_gibbs) + "," + num(o.min_eig) + "," + num(o.trace_drift);
    if (with_state) {
      const Matrix& rho = traj.states[i].rho();
      for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r < dim; ++r) line += "," + num(rho(r, c).real()) + "," + num(rho(r, c).imag());
    }
    out << line << "\r\n";
  }
}

}  // namespace mds::cli
