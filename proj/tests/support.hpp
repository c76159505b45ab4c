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

#include <random>

#include "mdslab/linops.hpp"

namespace mds::test {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) { return hermitize(random_matrix(rng, d)); }

inline Matrix random_real_symmetric(std::mt19937_64& rng, Eigen::Index d) {
  return Matrix(random_hermitian(rng, d).real().cast<cplx>());
}

inline QuantumState random_state(std::mt19937_64& rng, Eigen::Index d, double shift = 0.05) {
  const Matrix x = random_matrix(rng, d);
  return QuantumState::normalized(x * x.adjoint() + shift * Matrix::Identity(d, d));
}

inline Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(Eigen::Index(v.size()), Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

inline Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix sigma_z() { return diag({1.0, -1.0}); }

}  // namespace mds::test
