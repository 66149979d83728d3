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

// Numerical helpers: adaptive quadrature, Gauss-Hermite rules, 1-D maximization.
#pragma once

#include "qutrit_ctrl/types.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace qctrl {

// Adaptive 31-point Gauss-Kronrod integral of f over [a, b].
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-12,
                          unsigned max_depth = 15) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, rel_tol, &err);
}

// Fixed 20-point Gauss-Legendre rule on [a, b].
template <class F>
double integrate_gauss(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Hermite rule for weight exp(-x^2), Golub-Welsch.
inline QuadratureRule gauss_hermite(int n) {
  require(n >= 1, "gauss_hermite: n must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::sqrt(kPi);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v * v;
  }
  return rule;
}

// Rule for E[f(Z)], Z ~ N(0, 1): nodes sqrt(2) x_k, weights w_k / sqrt(pi).
inline QuadratureRule standard_normal_rule(int n) {
  QuadratureRule r = gauss_hermite(n);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] *= std::sqrt(2.0);
    r.weights[k] /= std::sqrt(kPi);
  }
  return r;
}

// Brent (golden-section + parabolic) maximization on [a, b].
template <class F>
std::pair<double, double> maximize_1d(F&& f, double a, double b, int bits = 40) {
  auto neg = [&](double x) { return -f(x); };
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::brent_find_minima(neg, a, b, bits, iters);
  return {r.first, -r.second};
}

// Coarse scan then Brent refinement around the best scan point.
template <class F>
std::pair<double, double> maximize_scan(F&& f, double a, double b, int n_scan,
                                        int bits = 40) {
  require(n_scan >= 3, "maximize_scan: need at least 3 scan points");
  const double h = (b - a) / (n_scan - 1);
  int best = 0;
  double best_v = -1e300;
  for (int k = 0; k < n_scan; ++k) {
    const double v = f(a + k * h);
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  const double lo = std::max(a, a + (best - 1) * h);
  const double hi = std::min(b, a + (best + 1) * h);
  auto r = maximize_1d(f, lo, hi, bits);
  if (r.second < best_v) return {a + best * h, best_v};
  return r;
}

// Trapezoid rule on samples (x_k, y_k).
inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) s += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  return s;
}

}  // namespace qctrl
