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

// STIRAP, superadiabatic STIRAP (saSTIRAP) and the fractional-STIRAP NOT gate
// on the 0-2 subspace, with either a direct or a two-photon CD drive.
#pragma once

#include "qutrit_ctrl/evolve.hpp"
#include "qutrit_ctrl/pulses.hpp"
#include "qutrit_ctrl/qutrit_model.hpp"
#include "qutrit_ctrl/stark.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qctrl {

enum class Corrections { none, constant_phase, dynamical };
enum class CdMode { off, ideal_direct, two_photon };
enum class Backend { effective, carrier };

struct ProtocolConfig {
  QutritParams qutrit;
  double omega01_peak = 0.1;
  double omega12_peak = 0.1;
  double sigma = 36.0;
  double t_s = -72.0;
  double window_sigmas = 5.0;
  // Single-photon detuning w_d01 - w01 of the STIRAP tones (>= 0 is the
  // recommended side); the |1> diagonal of the drive frame is -delta.
  double delta = 0.0;
  // w01 - w_d of the two-photon tone; Delta/2 puts it on two-photon resonance.
  double delta02 = 0.5;
  Corrections corrections = Corrections::dynamical;
  CdMode cd_mode = CdMode::two_photon;
  Backend backend = Backend::effective;
  std::optional<FractionalParams> fractional;
  bool stirap_tones = true;
  // Effective 0-2 area the two-photon tone is normalized to (unset: CD shape as is).
  std::optional<double> two_photon_area;
  // Static tone phase relative to the CD phase; unset means optimize.
  std::optional<double> constant_phase_offset;
  // Actual/nominal two-photon amplitude and additive tone-phase error.
  double cd_amplitude_scale = 1.0;
  double cd_phase_offset = 0.0;
  IntegratorConfig integrator;

  DriveDetunings frame_detunings() const { return {-delta, delta}; }

  void validate() const {
    qutrit.validate();
    require(sigma > 0, "protocol: sigma must be > 0");
    require(std::isfinite(t_s), "protocol: t_s must be finite");
    require(omega01_peak > 0 && omega12_peak > 0, "protocol: peak amplitudes must be > 0");
    require(window_sigmas > 0, "protocol: window_sigmas must be > 0");
    require(std::isfinite(delta), "protocol: delta must be finite");
    require(cd_amplitude_scale >= 0, "protocol: cd_amplitude_scale must be >= 0");
    if (fractional) require(fractional->tau > 0, "protocol: fractional tau must be > 0");
    if (cd_mode == CdMode::two_photon) {
      require(delta02 > 0 && delta02 < qutrit.anharmonicity,
              "protocol: delta02 must lie in (0, Delta) for the two-photon CD drive");
      check_poles(delta02, qutrit);
    }
    if (two_photon_area) require(*two_photon_area > 0, "protocol: two_photon_area must be > 0");
    integrator.validate();
  }
};

// Time-resolved drive of one protocol run. Dynamical phase corrections are
// computed from the nominal (unperturbed) two-photon tone.
class ProtocolDrive {
 public:
  explicit ProtocolDrive(const ProtocolConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    schedule_ = stirap_schedule(cfg.omega01_peak, cfg.omega12_peak, cfg.sigma, cfg.t_s,
                                cfg.window_sigmas);
    if (cfg.fractional) schedule_ = fractional_schedule(schedule_, *cfg.fractional);
    det_ = cfg.frame_detunings();
    if (cfg.cd_mode == CdMode::two_photon && cfg.two_photon_area) {
      const double area = pulse_area(
          [&](double t) {
            const double m = nominal_tone(t).magnitude;
            return cfg_.qutrit.lambda * m * m / (2.0 * cfg_.delta02);
          },
          schedule_.window, 1e-11);
      require(area > 0, "protocol: two-photon tone has zero area");
      normalization_ = std::sqrt(*cfg.two_photon_area / area);
    }
    if (cfg.cd_mode == CdMode::two_photon && cfg.corrections == Corrections::dynamical) {
      phases_ = DynamicalPhases([this](double t) { return nominal_tone(t).magnitude; },
                                cfg.delta02, cfg.qutrit, schedule_.window);
    }
  }

  const ProtocolConfig& config() const { return cfg_; }
  const PulseSchedule& schedule() const { return schedule_; }
  Window window() const { return schedule_.window; }
  DriveDetunings detunings() const { return det_; }
  double normalization() const { return normalization_; }

  CdTerms cd_terms(double t) const {
    if (cfg_.cd_mode == CdMode::off) return {};
    return detuned_cd_terms(schedule_, det_.delta01, t);
  }

  // Nominal two-photon tone realizing the 0-2 CD coupling.
  TwoPhotonTone nominal_tone(double t) const {
    TwoPhotonTone tone = two_photon_realization(2.0 * kI * cd_terms(t).a02, cfg_.delta02,
                                                cfg_.qutrit.lambda);
    tone.magnitude *= normalization_;
    return tone;
  }

  PhaseTriple phases(double t) const {
    if (phases_) return (*phases_)(t);
    return {};
  }

  // Applied two-photon tone (fluctuations and phase corrections included).
  Complex tone(double t) const {
    const TwoPhotonTone nom = nominal_tone(t);
    double phase = nom.phase + cfg_.cd_phase_offset;
    if (cfg_.corrections == Corrections::constant_phase) {
      phase += cfg_.constant_phase_offset.value_or(0.0);
    } else if (cfg_.corrections == Corrections::dynamical) {
      phase += 0.5 * phases(t).phi02;
    }
    return std::polar(nom.magnitude * cfg_.cd_amplitude_scale, phase);
  }

  // STIRAP tone amplitudes including the detuned CD corrections (pi/2 offset).
  std::pair<Complex, Complex> stirap_amplitudes(double t, const CdTerms& cd) const {
    if (!cfg_.stirap_tones) return {0.0, 0.0};
    return {schedule_.env01.value(t) + 2.0 * kI * cd.a01,
            schedule_.env12.value(t) + 2.0 * kI * cd.a12};
  }

  Matrix3 effective_hamiltonian(double t) const {
    const CdTerms cd = cd_terms(t);
    const auto [c01, c12] = stirap_amplitudes(t, cd);
    EffectiveTerms e;
    e.omega01 = c01;
    e.omega12 = c12;
    e.detunings = det_;
    if (cfg_.cd_mode == CdMode::ideal_direct) {
      e.omega_eff = 2.0 * kI * cd.a02;
    } else if (cfg_.cd_mode == CdMode::two_photon) {
      const TwoPhotonTone nom = nominal_tone(t);
      double phase = nom.phase + cfg_.cd_phase_offset;
      if (cfg_.corrections == Corrections::constant_phase) {
        phase += cfg_.constant_phase_offset.value_or(0.0);
      }
      const Complex base = std::polar(nom.magnitude * cfg_.cd_amplitude_scale, phase);
      const double mismatch =
          2.0 * cfg_.delta02 - cfg_.qutrit.anharmonicity - det_.delta01 - det_.delta12;
      e.omega_eff = effective_coupling(base, cfg_.delta02, cfg_.qutrit) *
                    std::polar(1.0, -mismatch * t);
      e.shifts = level_shifts(std::abs(base), cfg_.delta02, cfg_.qutrit);
      if (cfg_.corrections == Corrections::dynamical) e.phases = phases(t);
    }
    return build_effective_hamiltonian(e);
  }

  std::vector<Tone> carrier_tones(double t) const {
    const CdTerms cd = cd_terms(t);
    const auto [c01, c12] = stirap_amplitudes(t, cd);
    const PhaseTriple ph =
        cfg_.corrections == Corrections::dynamical ? phases(t) : PhaseTriple{};
    std::vector<Tone> tones;
    tones.reserve(3);
    if (cfg_.stirap_tones) {
      tones.push_back({Transition::t01, c01 * std::polar(1.0, ph.phi01), det_.delta01});
      tones.push_back({Transition::t12, c12 * std::polar(1.0, ph.phi12), det_.delta12});
    }
    if (cfg_.cd_mode == CdMode::ideal_direct) {
      tones.push_back({Transition::t02, 2.0 * kI * cd.a02, det_.delta01 + det_.delta12});
    } else if (cfg_.cd_mode == CdMode::two_photon) {
      tones.push_back({Transition::two_photon, tone(t), cfg_.delta02});
    }
    return tones;
  }

  Matrix3 carrier_hamiltonian(double t) const {
    return build_carrier_hamiltonian(carrier_tones(t), cfg_.qutrit, t);
  }

  Matrix3 hamiltonian(double t) const {
    return cfg_.backend == Backend::effective ? effective_hamiltonian(t) : carrier_hamiltonian(t);
  }

  // Integrator settings for this backend: carrier runs cap the step at
  // 0.02 / (largest carrier detuning).
  IntegratorConfig integrator_config() const {
    IntegratorConfig ic = cfg_.integrator;
    if (cfg_.backend == Backend::carrier) {
      double nu = std::max(std::abs(det_.delta01), std::abs(det_.delta12));
      if (cfg_.cd_mode == CdMode::two_photon) {
        nu = std::max({nu, std::abs(cfg_.delta02),
                       std::abs(cfg_.delta02 - cfg_.qutrit.anharmonicity)});
      }
      if (nu > 0) ic.max_step = std::min(ic.max_step, 0.02 / nu);
    }
    return ic;
  }

  double peak_tone_magnitude(int samples = 4001) const {
    double peak = 0.0;
    const Window w = window();
    for (int k = 0; k < samples; ++k) {
      const double t = w.start + w.duration() * k / (samples - 1);
      peak = std::max(peak, nominal_tone(t).magnitude);
    }
    return peak;
  }

 private:
  ProtocolConfig cfg_;
  PulseSchedule schedule_;
  DriveDetunings det_;
  double normalization_ = 1.0;
  std::optional<DynamicalPhases> phases_;
};

struct ProtocolRun {
  Trajectory trajectory;
  // Optimized static tone phase (relative to the CD phase); NaN if unused.
  double constant_phase_offset = std::numeric_limits<double>::quiet_NaN();
  // Absolute static tone phase for a positive CD lobe.
  double constant_phase = std::numeric_limits<double>::quiet_NaN();
  double peak_tone = 0.0;
  double pulse_area01 = 0.0;
  Populations final() const { return trajectory.final_populations(); }
};

inline Trajectory evolve_drive(const ProtocolDrive& drive, const StateVector& psi0) {
  return integrate([&](double t) { return drive.hamiltonian(t); }, psi0, drive.window(),
                   drive.integrator_config());
}

namespace detail {

inline void annotate(const ProtocolDrive& drive, ProtocolRun& run) {
  const ProtocolConfig& c = drive.config();
  run.pulse_area01 = pulse_area(drive.schedule().env01, drive.window());
  if (c.cd_mode == CdMode::two_photon) {
    run.peak_tone = drive.peak_tone_magnitude();
    if (!elimination_valid(run.peak_tone * c.cd_amplitude_scale, c.delta02)) {
      run.trajectory.notes.push_back(
          "two-photon tone exceeds delta02/3: adiabatic elimination is marginal");
    }
  }
  if (c.t_s > 0) run.trajectory.notes.push_back("intuitive pulse order (t_s > 0)");
  if (c.delta < 0 && c.stirap_tones) {
    run.trajectory.notes.push_back(
        "negative single-photon detuning: the two-photon tone crosses the bright-state resonance");
  }
}

// Maximizes final p_target over the static phase offset.
inline double optimize_constant_phase(ProtocolConfig cfg, const StateVector& psi0, int target) {
  cfg.corrections = Corrections::constant_phase;
  auto objective = [&](double offset) {
    cfg.constant_phase_offset = offset;
    ProtocolDrive d(cfg);
    return std::norm(evolve_drive(d, psi0).final_state()(target));
  };
  return maximize_scan(objective, -kPi, kPi, 25, 30).first;
}

}  // namespace detail

inline ProtocolRun run_protocol(const ProtocolConfig& cfg, const StateVector& psi0,
                                int target_for_phase_search = 2) {
  ProtocolConfig c = cfg;
  ProtocolRun run;
  if (c.cd_mode == CdMode::two_photon && c.corrections == Corrections::constant_phase &&
      !c.constant_phase_offset) {
    c.constant_phase_offset = detail::optimize_constant_phase(c, psi0, target_for_phase_search);
  }
  ProtocolDrive drive(c);
  run.trajectory = evolve_drive(drive, psi0);
  if (c.corrections == Corrections::constant_phase && c.constant_phase_offset) {
    double offset = *c.constant_phase_offset;
    // The effective model sees only 2 x phase: report the representative in [-pi/2, pi/2).
    if (c.backend == Backend::effective) {
      double absolute = std::remainder(-kPi / 4 + offset, kPi);
      if (absolute >= kPi / 2) absolute -= kPi;
      offset = absolute + kPi / 4;
    }
    run.constant_phase_offset = offset;
    run.constant_phase = -kPi / 4 + offset;
  }
  detail::annotate(drive, run);
  return run;
}

inline ProtocolRun run_stirap(ProtocolConfig cfg, const StateVector& psi0) {
  cfg.cd_mode = CdMode::off;
  cfg.corrections = Corrections::none;
  return run_protocol(cfg, psi0);
}

inline ProtocolRun run_sastirap(const ProtocolConfig& cfg, const StateVector& psi0) {
  require(cfg.cd_mode != CdMode::off, "run_sastirap: cd_mode must not be off");
  return run_protocol(cfg, psi0);
}

inline ProtocolRun run_detuned_sastirap(const ProtocolConfig& cfg, const StateVector& psi0) {
  require(cfg.cd_mode != CdMode::off, "run_detuned_sastirap: cd_mode must not be off");
  return run_protocol(cfg, psi0);
}

inline ProtocolRun run_not_gate(const ProtocolConfig& cfg, const StateVector& psi0) {
  require(cfg.fractional.has_value(), "run_not_gate: fractional parameters required");
  return run_protocol(cfg, psi0);
}

// Fractional saSTIRAP NOT gate defaults (Omega = Delta/6, sigma = 36, tau = 10 sigma).
inline ProtocolConfig not_gate_config() {
  ProtocolConfig c;
  c.qutrit.lambda = 1.0;
  c.omega01_peak = c.omega12_peak = 1.0 / 6.0;
  c.sigma = 36.0;
  c.t_s = -72.0;
  c.delta = 0.1;
  c.fractional = FractionalParams{kPi / 4, 360.0};
  return c;
}

// Baseline: the same two-photon CD-shaped tone alone, normalized to an
// effective 0-2 area of pi, with its dynamical 0-2 phase correction.
inline ProtocolConfig pi_pulse_gate(ProtocolConfig cfg) {
  cfg.stirap_tones = false;
  cfg.cd_mode = CdMode::two_photon;
  cfg.corrections = Corrections::dynamical;
  cfg.two_photon_area = kPi;
  return cfg;
}

struct GateMatrix {
  Eigen::Matrix2cd block;  // rows/cols: |0>, |2>
  Matrix3 columns;         // full images of |0>, |1> (unused, zero), |2>
  double leakage = 0.0;  // |1> population summed over the |0> and |2> runs
  double unitarity_defect = 0.0;
  double linearity_residual = 0.0;

  Complex operator()(int i, int j) const { return block(i, j); }
};

inline Eigen::Matrix2cd ideal_not() {
  Eigen::Matrix2cd u;
  u << 0.0, kI, -kI, 0.0;
  return u;
}

inline GateMatrix gate_from_images(const StateVector& u0, const StateVector& u2) {
  GateMatrix g;
  g.columns = Matrix3::Zero();
  g.columns.col(0) = u0;
  g.columns.col(2) = u2;
  g.block << u0(0), u2(0), u0(2), u2(2);
  g.leakage = std::norm(u0(1)) + std::norm(u2(1));
  const Eigen::Matrix2cd d = g.block.adjoint() * g.block - Eigen::Matrix2cd::Identity();
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(d);
  g.unitarity_defect = svd.singularValues()(0);
  return g;
}

// Images of |0>, |2> and (|0> + |2>)/sqrt(2); the third run checks that the
// relative phase of the two columns is consistent.
inline GateMatrix reconstruct_gate_matrix(const ProtocolConfig& cfg) {
  ProtocolDrive drive(cfg);
  const StateVector u0 = evolve_drive(drive, basis_state(0)).final_state();
  const StateVector u2 = evolve_drive(drive, basis_state(2)).final_state();
  const StateVector sup = (basis_state(0) + basis_state(2)) / std::sqrt(2.0);
  const StateVector us = evolve_drive(drive, sup).final_state();
  GateMatrix g = gate_from_images(u0, u2);
  if (g.leakage > 0.05) {
    throw NumericalError("reconstruct_gate_matrix: leakage " + std::to_string(g.leakage) +
                         " > 0.05, reconstruction unreliable");
  }
  g.linearity_residual = (us - (u0 + u2) / std::sqrt(2.0)).norm();
  return g;
}

inline double gate_fidelity_up_to_phase(const Eigen::Matrix2cd& g, const Eigen::Matrix2cd& ideal) {
  return std::abs((ideal.adjoint() * g).trace()) / 2.0;
}

// |<psi_f | U psi_i>|^2 with U acting on the full qutrit.
inline double state_fidelity(const Matrix3& u, const StateVector& psi_i, const StateVector& psi_f) {
  return std::norm(psi_f.dot(u * psi_i));
}

inline Matrix3 embed(const Eigen::Matrix2cd& u) {
  Matrix3 m = Matrix3::Zero();
  m(0, 0) = u(0, 0);
  m(0, 2) = u(0, 1);
  m(2, 0) = u(1, 0);
  m(2, 2) = u(1, 1);
  return m;
}

// psi_i(x) = sqrt(x)|0> + i sqrt(1 - x)|2>.
inline StateVector gate_input(double x) {
  require(x >= 0 && x <= 1, "gate_input: x must lie in [0, 1]");
  StateVector psi = StateVector::Zero();
  psi(0) = std::sqrt(x);
  psi(2) = kI * std::sqrt(1.0 - x);
  return psi;
}

struct GateScanPoint {
  double x = 0.0;
  double fidelity = 0.0;
  double p0 = 0.0;
  double p2 = 0.0;
};

// Fidelity and output populations for psi_i(x), from the images of |0> and |2>
// by linearity.
inline std::vector<GateScanPoint> gate_scan_from_images(const StateVector& u0, const StateVector& u2,
                                                        const std::vector<double>& xs) {
  const Matrix3 target = embed(ideal_not());
  std::vector<GateScanPoint> out;
  out.reserve(xs.size());
  for (double x : xs) {
    const StateVector in = gate_input(x);
    const StateVector outv = in(0) * u0 + in(2) * u2;
    const StateVector ideal = target * in;
    GateScanPoint p;
    p.x = x;
    p.fidelity = std::norm(ideal.dot(outv));
    p.p0 = std::norm(outv(0));
    p.p2 = std::norm(outv(2));
    out.push_back(p);
  }
  return out;
}

inline std::vector<GateScanPoint> gate_scan(const ProtocolConfig& cfg, const std::vector<double>& xs) {
  ProtocolDrive drive(cfg);
  const StateVector u0 = evolve_drive(drive, basis_state(0)).final_state();
  const StateVector u2 = evolve_drive(drive, basis_state(2)).final_state();
  return gate_scan_from_images(u0, u2, xs);
}

inline std::vector<double> unit_grid(int n) {
  std::vector<double> xs(n);
  for (int k = 0; k < n; ++k) xs[k] = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
  return xs;
}

}  // namespace qctrl
