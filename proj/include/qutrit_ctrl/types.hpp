// Copyright 2025 The qutrit-ctrl Authors
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

// Basic value types and the error hierarchy. All quantities are in units of
// the anharmonicity (Delta = 1, hbar = 1): rates in Delta, times in 1/Delta.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qctrl {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;
using StateVector = Eigen::Vector3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

struct Window {
  double start = 0.0;
  double end = 0.0;
  double duration() const { return end - start; }
};

struct Populations {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double operator[](int k) const { return k == 0 ? p0 : (k == 1 ? p1 : p2); }
};

inline StateVector basis_state(int k) {
  StateVector psi = StateVector::Zero();
  psi(k) = 1.0;
  return psi;
}

inline Populations populations(const StateVector& psi) {
  return {std::norm(psi(0)), std::norm(psi(1)), std::norm(psi(2))};
}

// Invalid physical or numerical parameters passed to a library function.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed job configuration (cli exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure during a run (cli exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Perturbative formula evaluated at one of its poles.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Mixing angle undefined (both pump envelopes zero, no prior value).
class DegenerateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ParameterError(msg);
}

}  // namespace qctrl
