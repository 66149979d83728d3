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

// Two-photon drive of the 0-2 transition: adiabatic elimination of |1>,
// AC Stark shifts and the accumulated dynamical phases.
#pragma once

#include "qutrit_ctrl/quadrature.hpp"
#include "qutrit_ctrl/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace qctrl {

struct QutritParams {
  double omega01 = 30.0;       // bare 0-1 frequency; only the carrier picture's labels use it
  double anharmonicity = 1.0;  // Delta = omega01 - omega12, the unit of energy
  double lambda = std::sqrt(2.0);

  double omega12() const { return omega01 - anharmonicity; }
  double omega02() const { return omega01 + omega12(); }

  void validate() const {
    require(anharmonicity > 0, "QutritParams: anharmonicity must be > 0");
    require(lambda > 0, "QutritParams: lambda must be > 0");
    require(std::isfinite(omega01), "QutritParams: omega01 must be finite");
  }
};

struct LevelShifts {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps01() const { return eps1 - eps0; }
  double eps12() const { return eps2 - eps1; }
  double eps02() const { return eps2 - eps0; }
};

inline constexpr double kPoleGuard = 1e-6;

inline void check_poles(double delta02, const QutritParams& q) {
  if (std::abs(delta02) < kPoleGuard || std::abs(q.anharmonicity - delta02) < kPoleGuard) {
    throw SingularityError("Stark shift pole: delta02 within 1e-6 of 0 or Delta");
  }
}

// Shift coefficients per unit |Omega02|^2: eps_k = c_k |Omega02|^2.
inline LevelShifts shift_coefficients(double delta02, const QutritParams& q) {
  check_poles(delta02, q);
  LevelShifts c;
  c.eps0 = -1.0 / (4.0 * delta02);
  c.eps2 = -q.lambda * q.lambda / (4.0 * (q.anharmonicity - delta02));
  c.eps1 = -c.eps0 - c.eps2;
  return c;
}

inline LevelShifts level_shifts(double omega02_magnitude, double delta02, const QutritParams& q) {
  const LevelShifts c = shift_coefficients(delta02, q);
  const double m2 = omega02_magnitude * omega02_magnitude;
  return {c.eps0 * m2, c.eps1 * m2, c.eps2 * m2};
}

// Omega_eff = -lambda Omega02^2 / (2 delta02); the complex square doubles the tone phase.
inline Complex effective_coupling(Complex omega02, double delta02, const QutritParams& q) {
  check_poles(delta02, q);
  return -q.lambda * omega02 * omega02 / (2.0 * delta02);
}

// Elimination is trusted for |delta02| >= 3 |Omega02| (callers warn otherwise).
inline bool elimination_valid(double omega02_magnitude, double delta02) {
  return std::abs(delta02) >= 3.0 * std::abs(omega02_magnitude);
}

// Effective qutrit Hamiltonian of a constant two-photon tone, in the frame
// rotating at the tone frequency (|1> at w_d, |2> at 2 w_d).
inline Matrix3 adiabatic_eliminated_hamiltonian(Complex omega02, double delta02,
                                                const QutritParams& q) {
  const LevelShifts e = level_shifts(std::abs(omega02), delta02, q);
  const Complex w = effective_coupling(omega02, delta02, q);
  Matrix3 h = Matrix3::Zero();
  h(0, 0) = e.eps0;
  h(1, 1) = e.eps1 + delta02;
  h(2, 2) = e.eps2 + 2.0 * delta02 - q.anharmonicity;
  h(0, 2) = 0.5 * w;
  h(2, 0) = std::conj(h(0, 2));
  return h;
}

struct PhaseTriple {
  double phi01 = 0.0;
  double phi12 = 0.0;
  double phi02 = 0.0;
};

// phi_ij(t) = integral of eps_ij from window start, tabulated on an adaptive
// grid and evaluated by cubic Hermite interpolation. All three shifts are
// proportional to |Omega02(t)|^2, so one cumulative integral carries them.
class DynamicalPhases {
 public:
  DynamicalPhases() = default;

  DynamicalPhases(const std::function<double(double)>& magnitude02, double delta02,
                  const QutritParams& q, Window w, double tol = 1e-9)
      : coeff_(shift_coefficients(delta02, q)), window_(w) {
    require(w.end > w.start, "DynamicalPhases: empty window");
    auto density = [&](double t) {
      const double m = magnitude02(t);
      return m * m;
    };
    const double scale = std::max({std::abs(coeff_.eps01()), std::abs(coeff_.eps12()),
                                   std::abs(coeff_.eps02()), 1e-300});
    const double m_tol = tol / scale;
    const int n0 = 64;
    const double h0 = w.duration() / n0;
    double peak = 0.0;
    for (int k = 0; k <= 4 * n0; ++k) peak = std::max(peak, density(w.start + k * h0 / 4));
    rate_floor_ = 1e-12 * peak;
    times_.push_back(w.start);
    cumulative_.push_back(0.0);
    rates_.push_back(density(w.start));
    for (int k = 0; k < n0; ++k) {
      const double a = w.start + k * h0;
      const double b = (k + 1 == n0) ? w.end : a + h0;
      refine(density, a, b, density(b), m_tol, 0);
    }
  }

  double cumulative_density(double t) const {
    if (times_.empty()) return 0.0;
    if (t <= times_.front()) return rates_.front() * (t - times_.front());
    if (t >= times_.back()) return cumulative_.back() + rates_.back() * (t - times_.back());
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double h = times_[k + 1] - times_[k];
    const double s = (t - times_[k]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * cumulative_[k] + (s3 - 2 * s2 + s) * h * rates_[k] +
           (-2 * s3 + 3 * s2) * cumulative_[k + 1] + (s3 - s2) * h * rates_[k + 1];
  }

  // Derivative of the interpolant (the tabulated |Omega02|^2).
  double density_rate(double t) const {
    if (times_.empty()) return 0.0;
    if (t <= times_.front()) return rates_.front();
    if (t >= times_.back()) return rates_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double h = times_[k + 1] - times_[k];
    const double s = (t - times_[k]) / h;
    return ((6 * s * s - 6 * s) * cumulative_[k] + (3 * s * s - 4 * s + 1) * h * rates_[k] +
            (-6 * s * s + 6 * s) * cumulative_[k + 1] + (3 * s * s - 2 * s) * h * rates_[k + 1]) /
           h;
  }

  PhaseTriple rates(double t) const {
    const double r = density_rate(t);
    return {coeff_.eps01() * r, coeff_.eps12() * r, coeff_.eps02() * r};
  }

  PhaseTriple operator()(double t) const {
    const double m = cumulative_density(t);
    return {coeff_.eps01() * m, coeff_.eps12() * m, coeff_.eps02() * m};
  }

  std::size_t nodes() const { return times_.size(); }
  Window window() const { return window_; }

 private:
  template <class D>
  void refine(D& density, double a, double b, double fb, double tol, int depth) {
    const double fa = rates_.back();
    const double ma = cumulative_.back();
    const double mid = 0.5 * (a + b);
    const double left = integrate_gauss(density, a, mid);
    const double right = integrate_gauss(density, mid, b);
    const double h = b - a;
    const double predicted = 0.5 * (ma + ma + left + right) + 0.125 * h * (fa - fb);
    const double fm = density(mid);
    const double slope = 1.5 * (left + right) / h - 0.25 * (fa + fb);
    const bool value_ok = std::abs(predicted - (ma + left)) <= tol;
    const bool rate_ok = std::abs(slope - fm) <= 1e-9 * std::abs(fm) + rate_floor_;
    if (!(value_ok && rate_ok) && depth < 40) {
      refine(density, a, mid, fm, tol, depth + 1);
      refine(density, mid, b, fb, tol, depth + 1);
      return;
    }
    times_.push_back(b);
    cumulative_.push_back(ma + left + right);
    rates_.push_back(fb);
  }

  LevelShifts coeff_;
  Window window_;
  double rate_floor_ = 0.0;
  std::vector<double> times_;
  std::vector<double> cumulative_;
  std::vector<double> rates_;
};

}  // namespace qctrl
