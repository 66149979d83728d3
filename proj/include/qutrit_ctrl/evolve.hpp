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

// Time evolution of i dpsi/dt = H(t) psi: adaptive DOP853 with dense output,
// a piecewise-constant matrix-exponential oracle, and trajectory utilities.
#pragma once

#include "qutrit_ctrl/detail/dop853_tableau.hpp"
#include "qutrit_ctrl/quadrature.hpp"
#include "qutrit_ctrl/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace qctrl {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0.0;  // 0 selects automatically
  // Record samples every sample_stride (plus both ends); 0 records only the
  // ends, a negative stride records every accepted step.
  double sample_stride = 0.0;
  std::size_t max_steps = 20'000'000;
  bool renormalize = false;

  void validate() const {
    require(rel_tol > 0 && abs_tol > 0, "IntegratorConfig: tolerances must be > 0");
    require(max_step > 0, "IntegratorConfig: max_step must be > 0");
    require(std::isfinite(sample_stride), "IntegratorConfig: sample_stride must be finite");
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double max_norm_error = 0.0;
  std::vector<std::string> notes;

  const StateVector& final_state() const { return states.back(); }
  Populations final_populations() const { return populations(states.back()); }
  Populations populations_at(std::size_t k) const { return populations(states[k]); }
};

namespace detail {

inline double rms_norm(const StateVector& v, const Eigen::Vector3d& scale) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += std::norm(v(i)) / (scale(i) * scale(i));
  return std::sqrt(s / 3.0);
}

inline Eigen::Vector3d abs3(const StateVector& v) {
  return {std::abs(v(0)), std::abs(v(1)), std::abs(v(2))};
}

}  // namespace detail

// Integrates psi0 from window.start to window.end (either direction).
template <class HamiltonianFn>
Trajectory integrate(HamiltonianFn&& hamiltonian, const StateVector& psi0, Window window,
                     const IntegratorConfig& cfg = {}) {
  namespace T = detail::dop853;
  cfg.validate();
  require(std::isfinite(window.start) && std::isfinite(window.end),
          "integrate: window must be finite");
  Trajectory traj;
  traj.times.push_back(window.start);
  traj.states.push_back(psi0);
  if (window.start == window.end) return traj;

  const double dir = window.end > window.start ? 1.0 : -1.0;
  auto rhs = [&](double t, const StateVector& y) -> StateVector {
    ++traj.rhs_evaluations;
    return -kI * (hamiltonian(t) * y);
  };
  auto scale_of = [&](const StateVector& a, const StateVector& b) -> Eigen::Vector3d {
    return (cfg.abs_tol + (detail::abs3(a).cwiseMax(detail::abs3(b)) * cfg.rel_tol).array())
        .matrix();
  };

  double t = window.start;
  StateVector y = psi0;
  StateVector f = rhs(t, y);
  const double norm0 = y.norm();

  // Initial step (Hairer's heuristic).
  double h_abs = cfg.first_step;
  if (h_abs <= 0.0) {
    const Eigen::Vector3d sc = scale_of(y, y);
    const double d0 = detail::rms_norm(y, sc);
    const double d1 = detail::rms_norm(f, sc);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(window.end - t));
    const StateVector y1 = y + dir * h0 * f;
    const StateVector f1 = rhs(t + dir * h0, y1);
    const double d2 = detail::rms_norm(f1 - f, sc) / h0;
    const double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                    : std::pow(0.01 / std::max(d1, d2), 1.0 / 8);
    h_abs = std::min(100 * h0, h1);
  }
  h_abs = std::min(h_abs, cfg.max_step);

  const bool sample_steps = cfg.sample_stride < 0;
  const bool sample_grid = cfg.sample_stride > 0;
  double next_sample = window.start + dir * cfg.sample_stride;

  std::array<StateVector, T::kExtendedStages> K;
  const double exponent = -1.0 / 8.0;
  auto record = [&](double ts, const StateVector& ys) {
    traj.times.push_back(ts);
    traj.states.push_back(ys);
    traj.max_norm_error = std::max(traj.max_norm_error, std::abs(ys.norm() - norm0));
  };

  while (dir * (window.end - t) > 0) {
    if (traj.steps >= cfg.max_steps) {
      std::ostringstream os;
      os << "integrate: max_steps exceeded at t = " << t;
      throw IntegrationError(os.str());
    }
    const double min_step =
        10 * std::abs(std::nextafter(t, dir * std::numeric_limits<double>::infinity()) - t);
    bool accepted = false;
    bool rejected = false;
    double h = 0.0;
    double t_new = t;
    StateVector y_new, f_new;
    while (!accepted) {
      if (h_abs < min_step) {
        std::ostringstream os;
        os << "integrate: step size underflow at t = " << t << " (h = " << h_abs << ")";
        throw IntegrationError(os.str());
      }
      h = dir * h_abs;
      t_new = t + h;
      if (dir * (t_new - window.end) > 0) t_new = window.end;
      h = t_new - t;
      h_abs = std::abs(h);

      K[0] = f;
      for (int s = 1; s < T::kStages; ++s) {
        StateVector dy = StateVector::Zero();
        for (int j = 0; j < s; ++j) {
          if (T::A[s][j] != 0.0) dy += T::A[s][j] * K[j];
        }
        K[s] = rhs(t + T::C[s] * h, y + h * dy);
      }
      StateVector incr = StateVector::Zero();
      for (int j = 0; j < T::kStages; ++j) {
        if (T::B[j] != 0.0) incr += T::B[j] * K[j];
      }
      y_new = y + h * incr;
      f_new = rhs(t + h, y_new);
      K[T::kStages] = f_new;

      StateVector err5 = StateVector::Zero(), err3 = StateVector::Zero();
      for (int j = 0; j <= T::kStages; ++j) {
        err5 += T::E5[j] * K[j];
        err3 += T::E3[j] * K[j];
      }
      const Eigen::Vector3d sc = scale_of(y, y_new);
      double e5 = 0.0, e3 = 0.0;
      for (int i = 0; i < 3; ++i) {
        e5 += std::norm(err5(i)) / (sc(i) * sc(i));
        e3 += std::norm(err3(i)) / (sc(i) * sc(i));
      }
      double error_norm = 0.0;
      if (e5 != 0.0 || e3 != 0.0) error_norm = h_abs * e5 / std::sqrt((e5 + 0.01 * e3) * 3.0);

      if (error_norm < 1.0) {
        double factor = error_norm == 0.0 ? 10.0 : std::min(10.0, 0.9 * std::pow(error_norm, exponent));
        if (rejected) factor = std::min(1.0, factor);
        h_abs = std::min(h_abs * factor, cfg.max_step);
        accepted = true;
      } else {
        h_abs *= std::max(0.2, 0.9 * std::pow(error_norm, exponent));
        rejected = true;
        ++traj.rejected;
      }
    }
    ++traj.steps;
    if (!std::isfinite(y_new.squaredNorm())) {
      std::ostringstream os;
      os << "integrate: non-finite state at t = " << t_new;
      throw IntegrationError(os.str());
    }

    // Dense output on [t, t_new] for grid samples inside the step.
    if (sample_grid && dir * (t_new - next_sample) > 0) {
      for (int s = T::kStages + 1; s < T::kExtendedStages; ++s) {
        StateVector dy = StateVector::Zero();
        for (int j = 0; j < s; ++j) {
          if (T::A[s][j] != 0.0) dy += T::A[s][j] * K[j];
        }
        K[s] = rhs(t + T::C[s] * h, y + h * dy);
      }
      std::array<StateVector, T::kInterpolatorPower> F;
      const StateVector dy = y_new - y;
      F[0] = dy;
      F[1] = h * f - dy;
      F[2] = 2.0 * dy - h * (f_new + f);
      for (int r = 0; r < 4; ++r) {
        StateVector acc = StateVector::Zero();
        for (int j = 0; j < T::kExtendedStages; ++j) {
          if (T::D[r][j] != 0.0) acc += T::D[r][j] * K[j];
        }
        F[3 + r] = h * acc;
      }
      while (dir * (t_new - next_sample) > 0) {
        const double x = (next_sample - t) / h;
        StateVector ys = StateVector::Zero();
        for (int i = T::kInterpolatorPower - 1, k = 0; i >= 0; --i, ++k) {
          ys += F[i];
          ys *= (k % 2 == 0) ? x : (1.0 - x);
        }
        ys += y;
        record(next_sample, ys);
        next_sample += dir * cfg.sample_stride;
      }
    }

    t = t_new;
    y = y_new;
    f = f_new;
    if (cfg.renormalize) {
      y *= norm0 / y.norm();
      f = rhs(t, y);
    }
    const bool at_end = dir * (window.end - t) <= 0;
    if (sample_steps && !at_end) record(t, y);
  }
  // Drop a grid sample that coincides with the end point to keep times strictly monotone.
  if (traj.times.size() > 1 && std::abs(traj.times.back() - window.end) <
                                   1e-12 * std::max(1.0, std::abs(window.end))) {
    traj.times.pop_back();
    traj.states.pop_back();
  }
  record(window.end, y);
  return traj;
}

// Piecewise-constant oracle: product of exp(-i H(t_mid) dt) over n equal steps,
// each exponential from the Hermitian eigendecomposition.
inline Matrix3 expm_hermitian(const Matrix3& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix3> es(h);
  const auto& v = es.eigenvectors();
  Eigen::Vector3cd phases;
  for (int k = 0; k < 3; ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * dt);
  return v * phases.asDiagonal() * v.adjoint();
}

template <class HamiltonianFn>
Matrix3 propagator_oracle(HamiltonianFn&& hamiltonian, Window window, std::size_t n_steps) {
  require(n_steps >= 1, "propagator_oracle: n_steps must be >= 1");
  const double dt = window.duration() / static_cast<double>(n_steps);
  Matrix3 u = Matrix3::Identity();
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double tm = window.start + (static_cast<double>(k) + 0.5) * dt;
    u = expm_hermitian(hamiltonian(tm), dt) * u;
  }
  return u;
}

// Time average of p_level over the recorded samples (trapezoid rule).
inline double averaged_population(const Trajectory& traj, int level) {
  require(level >= 0 && level <= 2, "averaged_population: level must be 0, 1 or 2");
  require(traj.times.size() >= 2, "averaged_population: need at least two samples");
  std::vector<double> p(traj.times.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(traj.states[k](level));
  const double span = traj.times.back() - traj.times.front();
  return trapezoid(traj.times, p) / span;
}

inline Populations final_populations(const Trajectory& traj) { return traj.final_populations(); }

// Columns: t, re/im of the three amplitudes, p0, p1, p2.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t[1/Delta],re_c0,im_c0,re_c1,im_c1,re_c2,im_c2,p0,p1,p2\n";
  char buf[64];
  auto put = [&](double v, bool last = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << (last ? '\n' : ',');
  };
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const StateVector& s = traj.states[k];
    put(traj.times[k]);
    for (int i = 0; i < 3; ++i) {
      put(s(i).real());
      put(s(i).imag());
    }
    const Populations p = populations(s);
    put(p.p0);
    put(p.p1);
    put(p.p2, true);
  }
}

}  // namespace qctrl
