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

// Gate fidelity averaged over Gaussian fluctuations of the two-photon tone's
// amplitude and phase.
#pragma once

#include "qutrit_ctrl/protocols.hpp"
#include "qutrit_ctrl/quadrature.hpp"
#include "qutrit_ctrl/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qctrl {

enum class AveragingMethod { gauss_hermite, monte_carlo };

inline std::string to_string(AveragingMethod m) {
  return m == AveragingMethod::gauss_hermite ? "gauss-hermite" : "monte-carlo";
}

// Amplitude error is relative to the optimal amplitude (v1 / Omega_opt - 1),
// phase error is in radians. Draws are clipped at +-clip_sigmas and the
// amplitude at zero.
struct FluctuationSpec {
  double sigma_amp = 0.0;
  double sigma_phase = 0.0;
  AveragingMethod method = AveragingMethod::gauss_hermite;
  int nodes = 15;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double clip_sigmas = 4.0;
  std::vector<double> xs = unit_grid(11);

  void validate() const {
    require(sigma_amp >= 0 && sigma_phase >= 0, "fluctuations: sigmas must be >= 0");
    require(nodes >= 5, "fluctuations: Gauss-Hermite nodes must be >= 5");
    require(samples >= 100, "fluctuations: Monte Carlo samples must be >= 100");
    require(clip_sigmas > 0, "fluctuations: clip_sigmas must be > 0");
    require(!xs.empty(), "fluctuations: xs must not be empty");
  }
};

struct AveragedFidelity {
  double mean = 0.0;
  double std_error = 0.0;  // Monte Carlo only
  std::size_t evaluations = 0;
  std::size_t clipped = 0;
  AveragingMethod method = AveragingMethod::gauss_hermite;
  int nodes = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Mean over xs of the NOT-gate state fidelity for a given tone error.
inline double mean_gate_fidelity(const ProtocolConfig& cfg, double amp_scale, double phase_offset,
                                 const std::vector<double>& xs) {
  ProtocolConfig c = cfg;
  c.cd_amplitude_scale = amp_scale;
  c.cd_phase_offset = phase_offset;
  const auto pts = gate_scan(c, xs);
  double s = 0.0;
  for (const auto& p : pts) s += p.fidelity;
  return s / static_cast<double>(pts.size());
}

namespace detail {

struct Draw {
  double amp_scale;
  double phase;
  bool clipped;
};

inline Draw make_draw(double za, double zp, const FluctuationSpec& f) {
  Draw d{1.0, 0.0, false};
  const double lim = f.clip_sigmas;
  if (std::abs(za) > lim || std::abs(zp) > lim) d.clipped = true;
  za = std::clamp(za, -lim, lim);
  zp = std::clamp(zp, -lim, lim);
  d.amp_scale = 1.0 + f.sigma_amp * za;
  if (d.amp_scale < 0.0) {
    d.amp_scale = 0.0;
    d.clipped = true;
  }
  d.phase = f.sigma_phase * zp;
  return d;
}

}  // namespace detail

inline AveragedFidelity averaged_fidelity(const ProtocolConfig& cfg, const FluctuationSpec& f,
                                          unsigned threads = 1) {
  f.validate();
  std::vector<detail::Draw> draws;
  std::vector<double> weights;
  AveragedFidelity out;
  out.method = f.method;
  if (f.method == AveragingMethod::gauss_hermite) {
    const int na = f.sigma_amp > 0 ? f.nodes : 1;
    const int np = f.sigma_phase > 0 ? f.nodes : 1;
    const QuadratureRule ra = standard_normal_rule(na);
    const QuadratureRule rp = standard_normal_rule(np);
    for (int i = 0; i < na; ++i) {
      for (int j = 0; j < np; ++j) {
        draws.push_back(detail::make_draw(ra.nodes[i], rp.nodes[j], f));
        weights.push_back(ra.weights[i] * rp.weights[j]);
      }
    }
    out.nodes = f.nodes;
  } else {
    std::mt19937_64 rng(f.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < f.samples; ++k) {
      const double za = normal(rng);
      const double zp = normal(rng);
      draws.push_back(detail::make_draw(za, zp, f));
      weights.push_back(1.0 / static_cast<double>(f.samples));
    }
    out.samples = f.samples;
    out.seed = f.seed;
  }
  std::vector<double> values(draws.size());
  parallel_for(draws.size(), threads, [&](std::size_t k) {
    values[k] = mean_gate_fidelity(cfg, draws[k].amp_scale, draws[k].phase, f.xs);
    if (!std::isfinite(values[k])) {
      throw NumericalError("averaged_fidelity: non-finite fidelity at sample " + std::to_string(k) +
                           " (amp_scale " + std::to_string(draws[k].amp_scale) + ", phase " +
                           std::to_string(draws[k].phase) + ")");
    }
  });
  double mean = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) mean += weights[k] * values[k];
  out.mean = mean;
  out.evaluations = values.size();
  for (const auto& d : draws) out.clipped += d.clipped ? 1 : 0;
  if (f.method == AveragingMethod::monte_carlo) {
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size() - 1);
    out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

// Mean gate fidelity over (delta, amplitude scale, phase offset); the phase
// offset is measured from the optimal tone phase.
inline SweepResult fidelity_landscape(const ProtocolConfig& cfg, const std::vector<double>& deltas,
                                      const std::vector<double>& amp_scales,
                                      const std::vector<double>& phase_offsets,
                                      const std::vector<double>& xs, unsigned threads = 1) {
  SweepResult r;
  r.axes = {{"delta[Delta]", deltas}, {"amp_scale[Omega_opt]", amp_scales},
            {"phase_offset[rad]", phase_offsets}};
  r.add_observable("mean_fidelity");
  auto& fid = r.observable("mean_fidelity");
  parallel_for(r.size(), threads, [&](std::size_t i) {
    const auto idx = r.unravel(i);
    ProtocolConfig c = cfg;
    c.delta = deltas[idx[0]];
    fid[i] = mean_gate_fidelity(c, amp_scales[idx[1]], phase_offsets[idx[2]], xs);
  });
  // Optimum per delta, first maximum in row-major order.
  nlohmann::json optima = nlohmann::json::array();
  const std::size_t block = amp_scales.size() * phase_offsets.size();
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    std::size_t best = d * block;
    for (std::size_t i = d * block; i < (d + 1) * block; ++i) {
      if (fid[i] > fid[best]) best = i;
    }
    const auto idx = r.unravel(best);
    optima.push_back({{"delta[Delta]", deltas[d]},
                      {"amp_scale[Omega_opt]", amp_scales[idx[1]]},
                      {"phase_offset[rad]", phase_offsets[idx[2]]},
                      {"fidelity", fid[best]}});
  }
  r.metadata["optima"] = optima;
  return r;
}

}  // namespace qctrl
