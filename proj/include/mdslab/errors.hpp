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

#include <stdexcept>
#include <string>

namespace mds {

/// Malformed input: wrong shape, non-Hermitian beyond tolerance, bad parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix function was asked for outside its domain (log/power of a non-positive spectrum).
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, double offending_eigenvalue)
      : std::domain_error(what), eigenvalue_(offending_eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Inverting K_rho would divide by a vanishing logarithmic mean.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double smallest)
      : std::runtime_error(what), smallest_(smallest) {}
  double smallest() const { return smallest_; }

 private:
  double smallest_;
};

/// A map passed to superop_from_map failed the linearity spot check.
class LinearityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model or scenario configuration is inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spectral function violates positivity or the KMS condition.
class SpectralError : public ConfigError {
 public:
  SpectralError(const std::string& what, double residual)
      : ConfigError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Generic numerical failure (non-convergence, ill-conditioning).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mds
