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

// Qutrit drive Hamiltonians (rotating-wave, effective two-photon, carrier)
// and the instantaneous eigenbasis of the STIRAP Hamiltonian.
#pragma once

#include "qutrit_ctrl/pulses.hpp"
#include "qutrit_ctrl/stark.hpp"
#include "qutrit_ctrl/types.hpp"

#include <cmath>
#include <vector>

namespace qctrl {

// Diagonal entries of the rotating-frame Hamiltonian: |1> sits at delta01,
// |2> at delta01 + delta12 (zero on two-photon resonance).
struct DriveDetunings {
  double delta01 = 0.0;
  double delta12 = 0.0;
};

inline void make_hermitian(Matrix3& h) {
  for (int i = 0; i < 3; ++i) {
    h(i, i) = h(i, i).real();
    for (int j = i + 1; j < 3; ++j) h(j, i) = std::conj(h(i, j));
  }
}

inline Matrix3 build_rwa_hamiltonian(Complex omega01, Complex omega12, DriveDetunings d) {
  Matrix3 h = Matrix3::Zero();
  h(1, 1) = d.delta01;
  h(2, 2) = d.delta01 + d.delta12;
  h(0, 1) = 0.5 * omega01;
  h(1, 2) = 0.5 * omega12;
  make_hermitian(h);
  return h;
}

inline Matrix3 build_rwa_hamiltonian(const PulseSchedule& s, DriveDetunings d, double t) {
  return build_rwa_hamiltonian(s.env01.value(t), s.env12.value(t), d);
}

// Dark |D> = cos(theta)|0> - sin(theta)|2>, bright |B> = sin(theta)|0> + cos(theta)|2>,
// |+> = sin(phi)|B> + cos(phi)|1>, |-> = cos(phi)|B> - sin(phi)|1>.
struct InstantaneousBasis {
  StateVector dark;
  StateVector plus;
  StateVector minus;
  double energy_dark = 0.0;
  double energy_plus = 0.0;
  double energy_minus = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

inline InstantaneousBasis eigensystem_from_angles(double theta, double omega_rms, double delta) {
  InstantaneousBasis b;
  b.theta = theta;
  b.phi = phi_angle(omega_rms, delta);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(b.phi), sp = std::sin(b.phi);
  b.dark << ct, 0.0, -st;
  StateVector bright;
  bright << st, 0.0, ct;
  const StateVector one = basis_state(1);
  b.plus = sp * bright + cp * one;
  b.minus = cp * bright - sp * one;
  const double q = std::hypot(omega_rms, delta);
  b.energy_plus = 0.5 * (delta + q);
  b.energy_minus = 0.5 * (delta - q);
  return b;
}

// Eigensystem of build_rwa_hamiltonian on two-photon resonance; delta is the
// |1> diagonal entry.
inline InstantaneousBasis instantaneous_eigensystem(double omega01, double omega12, double delta) {
  require(omega01 >= 0 && omega12 >= 0, "instantaneous_eigensystem: envelopes must be >= 0");
  if (omega01 == 0.0 && omega12 == 0.0) {
    throw DegenerateError("instantaneous_eigensystem: both envelopes vanish");
  }
  return eigensystem_from_angles(std::atan2(omega01, omega12), std::hypot(omega01, omega12), delta);
}

inline InstantaneousBasis instantaneous_eigensystem(const PulseSchedule& s, double delta, double t) {
  return instantaneous_eigensystem(s.env01.value(t), s.env12.value(t), delta);
}

// Local adiabaticity: max over the bright-sector states of |<n|dD/dt>| / |E_n - E_D|.
inline double adiabaticity_metric(const PulseSchedule& s, double t, double delta = 0.0) {
  const double a = s.env01.value(t);
  const double b = s.env12.value(t);
  const double r = std::hypot(a, b);
  if (r == 0.0 && delta == 0.0) throw DegenerateError("adiabaticity_metric: degenerate point");
  const double td = std::abs(theta_dot(s.env01, s.env12, t));
  const InstantaneousBasis e = eigensystem_from_angles(std::atan2(a, b), r, delta);
  const double plus = td * std::abs(std::sin(e.phi)) / std::abs(e.energy_plus);
  const double minus = e.energy_minus == 0.0 ? (std::cos(e.phi) == 0.0 ? 0.0 : INFINITY)
                                             : td * std::abs(std::cos(e.phi)) /
                                                   std::abs(e.energy_minus);
  return std::max(plus, minus);
}

// Window average of the local metric; scales as 1/(sigma Omega).
inline double global_adiabaticity(const PulseSchedule& s, double delta = 0.0, int samples = 4001) {
  double sum = 0.0;
  const double h = s.window.duration() / (samples - 1);
  for (int k = 0; k < samples; ++k) {
    const double w = (k == 0 || k == samples - 1) ? 0.5 : 1.0;
    sum += w * adiabaticity_metric(s, s.window.start + k * h, delta);
  }
  return sum * h / s.window.duration();
}

// Entries of the effective Hamiltonian with explicit phase factors:
//   H = 1/2 [[2 eps0, W01 e^{i phi01}, Weff e^{i phi02}],
//            [.,  2(eps1 + delta01), W12 e^{i phi12}],
//            [.,  .,  2(eps2 + delta01 + delta12)]].
struct EffectiveTerms {
  Complex omega01 = 0.0;
  Complex omega12 = 0.0;
  Complex omega_eff = 0.0;
  LevelShifts shifts;
  PhaseTriple phases;
  DriveDetunings detunings;
};

inline Matrix3 build_effective_hamiltonian(const EffectiveTerms& e) {
  Matrix3 h = Matrix3::Zero();
  h(0, 0) = e.shifts.eps0;
  h(1, 1) = e.shifts.eps1 + e.detunings.delta01;
  h(2, 2) = e.shifts.eps2 + e.detunings.delta01 + e.detunings.delta12;
  h(0, 1) = 0.5 * e.omega01 * std::polar(1.0, e.phases.phi01);
  h(1, 2) = 0.5 * e.omega12 * std::polar(1.0, e.phases.phi12);
  h(0, 2) = 0.5 * e.omega_eff * std::polar(1.0, e.phases.phi02);
  make_hermitian(h);
  return h;
}

enum class Transition { t01, t12, t02, two_photon };

// One microwave tone in the interaction picture of the bare qutrit.
// detuning = w_transition - w_carrier; for two_photon tones the reference
// transition is 0-1 (the 1-2 leg then sees detuning - Delta, weighted by lambda).
struct Tone {
  Transition target = Transition::t01;
  Complex amplitude = 0.0;
  double detuning = 0.0;
};

inline Matrix3 build_carrier_hamiltonian(const std::vector<Tone>& tones, const QutritParams& q,
                                         double t) {
  Matrix3 h = Matrix3::Zero();
  for (const Tone& tone : tones) {
    const Complex a = 0.5 * tone.amplitude;
    switch (tone.target) {
      case Transition::t01:
        h(0, 1) += a * std::polar(1.0, -tone.detuning * t);
        break;
      case Transition::t12:
        h(1, 2) += a * std::polar(1.0, -tone.detuning * t);
        break;
      case Transition::t02:
        h(0, 2) += a * std::polar(1.0, -tone.detuning * t);
        break;
      case Transition::two_photon:
        h(0, 1) += a * std::polar(1.0, -tone.detuning * t);
        h(1, 2) += q.lambda * a * std::polar(1.0, -(tone.detuning - q.anharmonicity) * t);
        break;
    }
  }
  make_hermitian(h);
  return h;
}

}  // namespace qctrl
