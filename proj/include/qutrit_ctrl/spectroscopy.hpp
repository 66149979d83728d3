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

// Stark-shift spectroscopy with a constant two-photon tone and a weak probe,
// simulated in the carrier picture.
#pragma once

#include "qutrit_ctrl/evolve.hpp"
#include "qutrit_ctrl/qutrit_model.hpp"
#include "qutrit_ctrl/stark.hpp"

#include <cmath>
#include <vector>

namespace qctrl {

enum class Probe { none, p01, p12 };

struct SpectroscopyConfig {
  QutritParams qutrit = {30.0, 1.0, 1.0};
  double delta02 = 0.5;          // w01 - w_d of the two-photon tone
  double omega02 = 0.2;          // two-photon tone amplitude
  Probe probe = Probe::p01;
  double probe_detuning = 0.0;   // w_probe - w_transition
  double probe_amplitude = 0.001;
  double duration = 0.0;         // 0: pi / probe_amplitude, or pi / |Omega_eff| without probe
  // Phase-correct the probe and the two-photon tone by the perturbative shifts.
  bool corrected = false;
  IntegratorConfig integrator = {2e-10, 1e-11, std::numeric_limits<double>::infinity(), 0.0, 0.25};

  void validate() const {
    qutrit.validate();
    check_poles(delta02, qutrit);
    require(omega02 >= 0, "spectroscopy: omega02 must be >= 0");
    require(probe == Probe::none || probe_amplitude > 0, "spectroscopy: probe amplitude must be > 0");
    require(duration >= 0, "spectroscopy: duration must be >= 0");
    integrator.validate();
  }

  double run_time() const {
    if (duration > 0) return duration;
    if (probe != Probe::none) return kPi / probe_amplitude;
    const double w = std::abs(effective_coupling(omega02, delta02, qutrit));
    require(w > 0, "spectroscopy: zero effective coupling and no duration given");
    return kPi / w;
  }
  int initial_level() const { return probe == Probe::p12 ? 2 : 0; }
  int observed_level() const { return probe == Probe::none ? 2 : 1; }
};

inline std::vector<Tone> spectroscopy_tones(const SpectroscopyConfig& c, double t) {
  const LevelShifts e = level_shifts(c.omega02, c.delta02, c.qutrit);
  std::vector<Tone> tones;
  const double tone_phase = c.corrected ? 0.5 * e.eps02() * t : 0.0;
  tones.push_back({Transition::two_photon, std::polar(c.omega02, tone_phase), c.delta02});
  if (c.probe == Probe::p01) {
    const double ph = c.corrected ? e.eps01() * t : 0.0;
    tones.push_back({Transition::t01, std::polar(c.probe_amplitude, ph), -c.probe_detuning});
  } else if (c.probe == Probe::p12) {
    const double ph = c.corrected ? e.eps12() * t : 0.0;
    tones.push_back({Transition::t12, std::polar(c.probe_amplitude, ph), -c.probe_detuning});
  }
  return tones;
}

inline Trajectory spectroscopy_trajectory(const SpectroscopyConfig& c) {
  c.validate();
  return integrate(
      [&](double t) { return build_carrier_hamiltonian(spectroscopy_tones(c, t), c.qutrit, t); },
      basis_state(c.initial_level()), Window{0.0, c.run_time()}, c.integrator);
}

// Time-averaged population of the observed level.
inline double spectroscopy_signal(const SpectroscopyConfig& c) {
  return averaged_population(spectroscopy_trajectory(c), c.observed_level());
}

// Peak of the probe line in [lo, hi] (probe detuning units).
inline double probe_ridge(SpectroscopyConfig c, double lo, double hi, int scan = 21) {
  auto f = [&](double d) {
    c.probe_detuning = d;
    return spectroscopy_signal(c);
  };
  return maximize_scan(f, lo, hi, scan, 36).first;
}

// Peak of the two-photon line in delta02 within [lo, hi].
inline double two_photon_ridge(SpectroscopyConfig c, double lo, double hi, int scan = 21) {
  c.probe = Probe::none;
  auto f = [&](double d) {
    c.delta02 = d;
    return spectroscopy_signal(c);
  };
  return maximize_scan(f, lo, hi, scan, 36).first;
}

// Exact level shifts: eigenvalues of the tone-frame Hamiltonian continued
// from the bare levels (reference for the perturbative formulas).
inline LevelShifts exact_level_shifts(double omega02, double delta02, const QutritParams& q) {
  Matrix3 h = Matrix3::Zero();
  h(1, 1) = delta02;
  h(2, 2) = 2.0 * delta02 - q.anharmonicity;
  h(0, 1) = 0.5 * omega02;
  h(1, 2) = 0.5 * q.lambda * omega02;
  make_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix3> es(h);
  LevelShifts s;
  double* out[3] = {&s.eps0, &s.eps1, &s.eps2};
  for (int level = 0; level < 3; ++level) {
    int best = 0;
    for (int k = 1; k < 3; ++k) {
      if (std::norm(es.eigenvectors()(level, k)) > std::norm(es.eigenvectors()(level, best))) best = k;
    }
    *out[level] = es.eigenvalues()(best) - h(level, level).real();
  }
  return s;
}

}  // namespace qctrl
