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

// Pulse envelopes, STIRAP schedules and counter-diabatic (CD) corrections.
#pragma once

#include "qutrit_ctrl/quadrature.hpp"
#include "qutrit_ctrl/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace qctrl {

struct GaussianPulse {
  double amplitude = 0.0;
  double center = 0.0;
  double sigma = 1.0;

  double value(double t) const {
    const double u = (t - center) / sigma;
    return amplitude * std::exp(-0.5 * u * u);
  }
  double derivative(double t) const {
    const double u = (t - center) / sigma;
    return -amplitude * u / sigma * std::exp(-0.5 * u * u);
  }
};

inline double gaussian_envelope(double peak, double center, double sigma, double t) {
  return GaussianPulse{peak, center, sigma}.value(t);
}

// Real, non-negative drive envelope. Sums of Gaussians carry analytic
// derivatives; user-supplied shapes without a derivative fall back to a
// five-point central difference.
class Envelope {
 public:
  Envelope() = default;
  explicit Envelope(std::vector<GaussianPulse> pulses) : pulses_(std::move(pulses)) {}
  Envelope(std::function<double(double)> f, std::function<double(double)> df = {})
      : custom_(std::move(f)), custom_derivative_(std::move(df)) {}

  double value(double t) const {
    double v = 0.0;
    for (const auto& p : pulses_) v += p.value(t);
    if (custom_) v += custom_(t);
    return v;
  }

  double derivative(double t) const {
    double d = 0.0;
    for (const auto& p : pulses_) d += p.derivative(t);
    if (custom_) d += custom_derivative_ ? custom_derivative_(t) : finite_difference(t);
    return d;
  }

  bool analytic() const { return !custom_ || static_cast<bool>(custom_derivative_); }
  const std::vector<GaussianPulse>& pulses() const { return pulses_; }

  double finite_difference(double t) const {
    const double h = 1e-3 * std::max(1.0, std::abs(t));
    return (-custom_(t + 2 * h) + 8 * custom_(t + h) - 8 * custom_(t - h) + custom_(t - 2 * h)) /
           (12 * h);
  }

 private:
  std::vector<GaussianPulse> pulses_;
  std::function<double(double)> custom_;
  std::function<double(double)> custom_derivative_;
};

// Pump pair of one adiabatic sub-sequence; the CD terms of a schedule are
// summed over its segments.
struct ChannelPair {
  Envelope env01;
  Envelope env12;
};

struct PulseSchedule {
  Envelope env01;
  Envelope env12;
  double sigma = 0.0;
  double t_s = 0.0;
  Window window;
  // Empty for a single STIRAP; two entries for the fractional sequence.
  std::vector<ChannelPair> segments;

  std::vector<ChannelPair> cd_segments() const {
    if (!segments.empty()) return segments;
    return {ChannelPair{env01, env12}};
  }
};

struct FractionalParams {
  double eta = kPi / 4;
  double tau = 0.0;
};

// Gaussian pair: Omega01 centered at 0, Omega12 at t_s (t_s < 0 is the
// counterintuitive order); window [min(0, t_s) - n sigma, max(0, t_s) + n sigma].
inline PulseSchedule stirap_schedule(double omega01_peak, double omega12_peak, double sigma,
                                     double t_s, double window_sigmas = 5.0) {
  require(sigma > 0, "stirap_schedule: sigma must be > 0");
  require(omega01_peak > 0 && omega12_peak > 0, "stirap_schedule: peaks must be > 0");
  require(window_sigmas > 0, "stirap_schedule: window must be > 0");
  PulseSchedule s;
  s.env01 = Envelope({GaussianPulse{omega01_peak, 0.0, sigma}});
  s.env12 = Envelope({GaussianPulse{omega12_peak, t_s, sigma}});
  s.sigma = sigma;
  s.t_s = t_s;
  s.window = {std::min(0.0, t_s) - window_sigmas * sigma, std::max(0.0, t_s) + window_sigmas * sigma};
  return s;
}

// Two fractional STIRAPs separated by tau; the second runs the first
// backwards with the roles of the channels exchanged.
inline PulseSchedule fractional_schedule(const PulseSchedule& base, const FractionalParams& p) {
  require(base.env01.pulses().size() == 1 && base.env12.pulses().size() == 1,
          "fractional_schedule: base must be a single Gaussian pair");
  require(p.tau > 0, "fractional_schedule: tau must be > 0");
  const GaussianPulse a = base.env01.pulses()[0];
  const GaussianPulse b = base.env12.pulses()[0];
  const double c = std::cos(p.eta);
  const double s = std::sin(p.eta);
  auto scaled = [](GaussianPulse g, double k, double shift) {
    g.amplitude *= k;
    g.center += shift;
    return g;
  };
  ChannelPair first{Envelope({a, scaled(b, c, 0.0)}), Envelope({scaled(b, s, 0.0)})};
  ChannelPair second{Envelope({scaled(a, s, p.tau)}),
                     Envelope({scaled(b, 1.0, p.tau), scaled(a, c, p.tau)})};
  PulseSchedule f;
  std::vector<GaussianPulse> e01 = first.env01.pulses();
  e01.insert(e01.end(), second.env01.pulses().begin(), second.env01.pulses().end());
  std::vector<GaussianPulse> e12 = first.env12.pulses();
  e12.insert(e12.end(), second.env12.pulses().begin(), second.env12.pulses().end());
  f.env01 = Envelope(std::move(e01));
  f.env12 = Envelope(std::move(e12));
  f.sigma = base.sigma;
  f.t_s = base.t_s;
  f.window = {base.window.start, base.window.end + p.tau};
  f.segments = {first, second};
  return f;
}

// tan(theta) = Omega01 / Omega12.
inline double mixing_angle(const Envelope& e01, const Envelope& e12, double t) {
  const double a = e01.value(t);
  const double b = e12.value(t);
  if (a == 0.0 && b == 0.0) throw DegenerateError("mixing angle undefined: both envelopes vanish");
  return std::atan2(a, b);
}

inline double mixing_angle(const PulseSchedule& s, double t) {
  return mixing_angle(s.env01, s.env12, t);
}

// Holds the last defined theta where both envelopes vanish.
class MixingAngleTracker {
 public:
  double operator()(const Envelope& e01, const Envelope& e12, double t) {
    const double a = e01.value(t);
    const double b = e12.value(t);
    if (a == 0.0 && b == 0.0) {
      if (!last_) throw DegenerateError("mixing angle queried before any defined point");
      return *last_;
    }
    last_ = std::atan2(a, b);
    return *last_;
  }

 private:
  std::optional<double> last_;
};

// d(theta)/dt from the quotient rule.
inline double theta_dot(const Envelope& e01, const Envelope& e12, double t) {
  const double a = e01.value(t);
  const double b = e12.value(t);
  const double r2 = a * a + b * b;
  if (r2 == 0.0) return 0.0;
  return (e01.derivative(t) * b - a * e12.derivative(t)) / r2;
}

inline double theta_dot(const PulseSchedule& s, double t) {
  double v = 0.0;
  for (const auto& seg : s.cd_segments()) v += theta_dot(seg.env01, seg.env12, t);
  return v;
}

// Resonant CD coupling on 0-2: H_cd(0,2) = i theta_dot, i.e. Omega_cd = 2i theta_dot.
inline Complex cd_envelope(const PulseSchedule& s, double t) {
  if (s.env01.value(t) == 0.0 && s.env12.value(t) == 0.0) {
    throw DegenerateError("cd_envelope: both envelopes vanish");
  }
  return 2.0 * kI * theta_dot(s, t);
}

// Closed form for equal Gaussian peaks: |Omega_cd| = (|t_s|/sigma^2) sech(...).
inline Complex cd_envelope_sech(double t_s, double sigma, double t) {
  const double a = std::abs(t_s) / (sigma * sigma);
  return kI * (a / std::cosh(a * (t - 0.5 * t_s)));
}

struct TwoPhotonTone {
  double magnitude = 0.0;
  double phase = 0.0;
  Complex value() const { return std::polar(magnitude, phase); }
};

// Tone on the 0-1 carrier whose two-photon coupling -lambda Omega02^2/(2 delta02)
// reproduces omega_cd.
inline TwoPhotonTone two_photon_realization(Complex omega_cd, double delta02, double lambda) {
  require(lambda > 0, "two_photon_realization: lambda must be > 0");
  require(delta02 != 0.0, "two_photon_realization: delta02 must be nonzero");
  const double ratio = 2.0 * delta02 * std::abs(omega_cd) / lambda;
  const double prefactor_arg = delta02 > 0 ? kPi : 0.0;
  TwoPhotonTone tone;
  tone.magnitude = std::sqrt(std::abs(ratio));
  const double target = std::abs(omega_cd) > 0 ? std::arg(omega_cd) : kPi / 2;
  tone.phase = 0.5 * (target - prefactor_arg);
  return tone;
}

// Two-photon version of the sech CD pulse for equal-peak Gaussians.
inline TwoPhotonTone two_photon_cd_envelope(double t_s, double sigma, double delta02,
                                            double lambda, double t) {
  const double radicand = 2.0 * delta02 * std::abs(cd_envelope_sech(t_s, sigma, t)) / lambda;
  if (!(radicand >= 0.0) || !(lambda > 0)) {
    throw ParameterError("two_photon_cd_envelope: negative radicand (delta02/lambda < 0)");
  }
  return two_photon_realization(cd_envelope_sech(t_s, sigma, t), delta02, lambda);
}

// Detuned CD Hamiltonian entries: H_cd(0,1) = i a01, H_cd(1,2) = i a12,
// H_cd(0,2) = i a02 with a01 = phi_dot sin(theta), a12 = -phi_dot cos(theta),
// a02 = theta_dot. delta is the |1> diagonal entry of the drive Hamiltonian.
struct CdTerms {
  double a01 = 0.0;
  double a12 = 0.0;
  double a02 = 0.0;
  CdTerms& operator+=(const CdTerms& o) {
    a01 += o.a01;
    a12 += o.a12;
    a02 += o.a02;
    return *this;
  }
};

inline CdTerms detuned_cd_terms(const Envelope& e01, const Envelope& e12, double delta, double t) {
  const double a = e01.value(t);
  const double b = e12.value(t);
  const double r2 = a * a + b * b;
  if (r2 == 0.0) return {};
  const double da = e01.derivative(t);
  const double db = e12.derivative(t);
  // tan(2 phi) = r / delta, so phi_dot = delta r_dot / (2 (r^2 + delta^2)).
  const double r_rdot = a * da + b * db;
  const double phi_dot_over_r = 0.5 * delta * r_rdot / (r2 * (r2 + delta * delta));
  CdTerms c;
  c.a01 = phi_dot_over_r * a;
  c.a12 = -phi_dot_over_r * b;
  c.a02 = (da * b - a * db) / r2;
  return c;
}

inline CdTerms detuned_cd_terms(const PulseSchedule& s, double delta, double t) {
  CdTerms c;
  for (const auto& seg : s.cd_segments()) c += detuned_cd_terms(seg.env01, seg.env12, delta, t);
  return c;
}

// Second mixing angle: tan(phi) = Omega_rms / (sqrt(Omega_rms^2 + delta^2) + delta).
inline double phi_angle(double omega_rms, double delta) {
  return 0.5 * std::atan2(omega_rms, delta);
}

template <class F>
double pulse_area(F&& magnitude, Window w, double rel_tol = 1e-12) {
  require(w.end > w.start, "pulse_area: empty window");
  return integrate_adaptive([&](double t) { return std::abs(magnitude(t)); }, w.start, w.end,
                            rel_tol);
}

inline double pulse_area(const Envelope& e, Window w, double rel_tol = 1e-12) {
  return pulse_area([&](double t) { return e.value(t); }, w, rel_tol);
}

}  // namespace qctrl
