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


// Acceptance runner: one PASS/FAIL line per criterion, details indented.
// Usage: acceptance [criterion numbers...]   (default: all)

#include "qutrit_ctrl/qutrit_ctrl.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace qctrl {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Report {
 public:
  void check(bool ok, const std::string& what) {
    all_ &= ok;
    std::printf("    [%s] %s\n", ok ? " ok " : "FAIL", what.c_str());
    std::fflush(stdout);
  }
  void info(const std::string& what) {
    std::printf("    [info] %s\n", what.c_str());
    std::fflush(stdout);
  }
  bool passed() const { return all_; }

 private:
  bool all_ = true;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

JobConfig default_job(const std::string& command) {
  return parse_job({{"command", command}, {"protocol", json::object()}});
}

ProtocolConfig transfer_config() {
  ProtocolConfig c;
  c.qutrit.lambda = std::sqrt(2.0);
  return c;
}

ProtocolConfig sweep_config(double delta, double omega) {
  ProtocolConfig c;
  c.qutrit.lambda = 1.0;
  c.sigma = 80.0;
  c.t_s = -160.0;
  c.delta = delta;
  c.omega01_peak = c.omega12_peak = omega;
  return c;
}

// 1 ------------------------------------------------------------------------
void transitionless(Report& r) {
  const auto t0 = Clock::now();
  for (double sw : {0.1, 0.3, 1.0, 3.0}) {
    ProtocolConfig c;
    c.omega01_peak = c.omega12_peak = sw / c.sigma;
    c.cd_mode = CdMode::ideal_direct;
    c.corrections = Corrections::none;
    c.integrator.sample_stride = c.sigma / 50;
    const ProtocolRun run = run_sastirap(c, basis_state(0));
    ProtocolDrive d(c);
    double worst = 1.0;
    for (std::size_t k = 0; k < run.trajectory.times.size(); ++k) {
      const double t = run.trajectory.times[k];
      const StateVector dark =
          instantaneous_eigensystem(d.schedule().env01.value(t), d.schedule().env12.value(t), 0.0).dark;
      worst = std::min(worst, std::abs(dark.dot(run.trajectory.states[k])));
    }
    r.check(run.final().p2 >= 1 - 1e-6, fmt("sigma*Omega=%.1f: p2 = %.12f >= 1-1e-6", sw, run.final().p2));
    r.check(worst >= 1 - 1e-6, fmt("sigma*Omega=%.1f: min dark overlap = %.12f over %zu samples", sw, worst,
                                   run.trajectory.times.size()));
  }
  const double s = seconds_since(t0);
  r.check(s < 10, fmt("runtime %.2f s < 10 s", s));
}

// 2 ------------------------------------------------------------------------
void transfer(Report& r) {
  auto t0 = Clock::now();
  ProtocolConfig c = transfer_config();
  const ProtocolRun dyn = run_sastirap(c, basis_state(0));
  c.corrections = Corrections::constant_phase;
  const ProtocolRun cst = run_sastirap(c, basis_state(0));
  const double s_eff = seconds_since(t0);
  const double p_dyn = dyn.final().p2, p_cst = cst.final().p2;
  r.check(p_dyn >= 0.999, fmt("dynamical corrections: p2 = %.10f >= 0.999", p_dyn));
  r.check(p_dyn - p_cst >= 0.005,
          fmt("constant-phase baseline p2 = %.6f (phase %.4f rad), lower by %.6f >= 0.005", p_cst,
              cst.constant_phase, p_dyn - p_cst));
  r.check(std::abs(dyn.pulse_area01 - 9.0) <= 0.9, fmt("pulse area %.5f rad within 10%% of 9.0", dyn.pulse_area01));
  r.info(fmt("peak two-photon tone %.6f Delta (Delta/7 = %.6f)", dyn.peak_tone, 1.0 / 7));
  r.check(s_eff < 30, fmt("effective backend runtime %.2f s < 30 s", s_eff));

  t0 = Clock::now();
  ProtocolConfig car = transfer_config();
  car.backend = Backend::carrier;
  const Populations pc = run_sastirap(car, basis_state(0)).final();
  const double s_car = seconds_since(t0);
  double diff = 0;
  for (int k = 0; k < 3; ++k) diff = std::max(diff, std::abs(pc[k] - dyn.final()[k]));
  r.check(diff < 1e-2, fmt("carrier cross-check p2 = %.6f, max population difference %.2e < 1e-2", pc.p2, diff));
  r.check(s_car < 600, fmt("carrier runtime %.2f s < 600 s", s_car));
}

// 3 ------------------------------------------------------------------------
double ridge_window_search(SpectroscopyConfig c, double target, double step) {
  const double lo = std::min(target, 0.0) - 0.01, hi = std::max(target, 0.0) + 0.01;
  const int n = static_cast<int>(std::ceil((hi - lo) / step)) + 1;
  return probe_ridge(c, lo, hi, n);
}

void stark_formulas(Report& r) {
  const JobConfig job2d = default_job("spectroscopy-2d");
  const double half_width = 0.5 * job2d.sweep.at("probe_amplitude").get<double>();
  r.info(fmt("ridge tolerance: half the probe linewidth = %.1e", half_width));

  // Shift identities on a grid.
  double id1 = 0, id2 = 0;
  for (double lambda : {1.0, std::sqrt(2.0)}) {
    QutritParams q{30.0, 1.0, lambda};
    for (int i = 1; i < 100; ++i) {
      const double d02 = 0.01 * i;
      if (std::abs(d02 - 1.0) < 1e-9) continue;
      for (int j = 0; j <= 20; ++j) {
        const double w = 0.01 * j;
        const LevelShifts e = level_shifts(w, d02, q);
        const double scale = std::max({std::abs(e.eps0), std::abs(e.eps1), std::abs(e.eps2)});
        if (scale == 0) continue;
        id1 = std::max(id1, std::abs(e.eps0 + e.eps1 + e.eps2) / scale);
        id2 = std::max(id2, std::abs(e.eps01() + e.eps12() - e.eps02()) / scale);
      }
    }
  }
  r.check(id1 <= 1e-15, fmt("eps0+eps1+eps2 = 0: max relative residual %.2e <= 1e-15", id1));
  r.check(id2 <= 1e-15, fmt("eps01+eps12 = eps02: max relative residual %.2e <= 1e-15", id2));

  // Refined ridges vs perturbative shifts; corrected runs vs zero.
  const SpectroscopyConfig base = detail::spectroscopy_base(job2d);
  struct Point {
    double lambda, delta02, omega02;
  };
  std::vector<Point> pts;
  for (double d02 : {0.3, 0.4, 0.6, 0.7}) {
    for (double w : {0.1, 0.2}) pts.push_back({1.0, d02, w});
  }
  for (double d02 : {0.3, 0.5 + 1.0 / 60, 0.7}) {
    for (double w : {0.1, 0.2}) pts.push_back({std::sqrt(2.0), d02, w});
  }
  double worst_pt = 0, worst_corr = 0, worst_exact = 0;
  for (const auto& p : pts) {
    for (Probe probe : {Probe::p01, Probe::p12}) {
      SpectroscopyConfig s = base;
      s.qutrit.lambda = p.lambda;
      s.delta02 = p.delta02;
      s.omega02 = p.omega02;
      s.probe = probe;
      const LevelShifts pt = level_shifts(p.omega02, p.delta02, s.qutrit);
      const LevelShifts ex = exact_level_shifts(p.omega02, p.delta02, s.qutrit);
      const double want = probe == Probe::p01 ? pt.eps01() : pt.eps12();
      const double exact = probe == Probe::p01 ? ex.eps01() : ex.eps12();
      const double ridge = ridge_window_search(s, want, half_width);
      s.corrected = true;
      const double ridge_c = ridge_window_search(s, exact - want, half_width);
      const double dev = std::abs(ridge - want);
      worst_pt = std::max(worst_pt, dev);
      worst_corr = std::max(worst_corr, std::abs(ridge_c));
      worst_exact = std::max(worst_exact, std::abs(ridge - exact));
      r.check(dev <= half_width && std::abs(ridge_c) <= half_width,
              fmt("lambda=%.3f delta02=%.4f |Omega02|=%.2f probe %s: ridge %+.5f, formula %+.5f "
                  "(exact %+.5f), corrected ridge %+.5f",
                  p.lambda, p.delta02, p.omega02, probe == Probe::p01 ? "01" : "12", ridge, want, exact,
                  ridge_c));
    }
  }
  r.info(fmt("worst |ridge - formula| = %.2e, worst |corrected ridge| = %.2e, worst |ridge - exact| = %.2e",
             worst_pt, worst_corr, worst_exact));

  // Avoided crossing of the dressed |0>, |2> levels near delta02 = Delta/2.
  {
    const QutritParams q{30.0, 1.0, 1.0};
    const double w = 0.2;
    double gap_min = 1e9, at = 0;
    for (int k = 0; k <= 4000; ++k) {
      const double d02 = 0.45 + 0.1 * k / 4000.0;
      Matrix3 h = Matrix3::Zero();
      h(1, 1) = d02;
      h(2, 2) = 2 * d02 - q.anharmonicity;
      h(0, 1) = 0.5 * w;
      h(1, 2) = 0.5 * q.lambda * w;
      make_hermitian(h);
      const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Matrix3>(h).eigenvalues();
      const double gap = ev(1) - ev(0);
      if (gap < gap_min) {
        gap_min = gap;
        at = d02;
      }
    }
    const double w_eff = std::abs(effective_coupling(w, 0.5, q));
    r.check(std::abs(at - 0.5) < 0.02 && std::abs(gap_min - w_eff) < 0.1 * w_eff,
            fmt("dressed-level gap minimum %.5f at delta02=%.4f (|Omega_eff| = %.5f)", gap_min, at, w_eff));
    SpectroscopyConfig s = base;
    s.qutrit = q;
    s.omega02 = w;
    const double d_star = two_photon_ridge(s, 0.45, 0.55, 41);
    s.probe = Probe::none;
    s.delta02 = d_star;
    const double on = spectroscopy_signal(s);
    s.delta02 = 0.4;
    s.duration = kPi / w_eff;
    const double off = spectroscopy_signal(s);
    r.check(std::abs(d_star - at) < 0.005 && on > 0.3 && off < 0.05,
            fmt("carrier two-photon line at delta02=%.4f: avg p2 %.3f on line, %.2e at delta02=0.4", d_star, on,
                off));
  }

  // Timing at 101 x 101 (all four default panels).
  const auto t0 = Clock::now();
  const CommandResult full = cmd_spectroscopy_2d(job2d);
  const double s = seconds_since(t0);
  check_finite(full);
  r.check(s < 1200, fmt("spectroscopy-2d at 101x101, %zu panels: %.1f s < 1200 s", full.tables.size() - 1, s));
}

// 4 ------------------------------------------------------------------------
void sweep(Report& r) {
  const auto t0 = Clock::now();
  const JobConfig job = default_job("sweep-delta-amp");
  const CommandResult out = cmd_sweep_delta_amp(job);
  const double s = seconds_since(t0);
  const SweepResult& t = out.tables.front().second;
  const auto& deltas = t.axes[0].values;
  const auto& sa = t.observable("sastirap_p2");
  const auto& st = t.observable("stirap_p2");
  const auto& rev = t.observable("reverse_sastirap_p0");
  double sa_min = 1, st_min = 1, rev_min = 1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sa_min = std::min(sa_min, sa[i]);
    st_min = std::min(st_min, st[i]);
    if (deltas[t.unravel(i)[0]] >= 0.05 - 1e-12) rev_min = std::min(rev_min, rev[i]);
  }
  r.check(sa_min >= 0.99, fmt("saSTIRAP min p2 over %zu points = %.10f >= 0.99", t.size(), sa_min));
  r.check(st_min < 0.95, fmt("bare STIRAP min p2 = %.4f < 0.95", st_min));
  r.check(rev_min >= 0.95, fmt("reverse saSTIRAP min p0 for delta >= 0.05 = %.6f >= 0.95", rev_min));
  r.check(s < 600, fmt("41x41 runtime %.1f s < 600 s", s));
}

// 5 ------------------------------------------------------------------------
void not_gate(Report& r) {
  const auto t0 = Clock::now();
  const JobConfig job = default_job("gate-scan");
  const CommandResult out = cmd_gate_scan(job);
  const double s = seconds_since(t0);
  const SweepResult& t = out.tables.front().second;
  const auto& xs = t.axes[0].values;
  const auto& f = t.observable("f_sastirap_fidelity");
  const auto& p2 = t.observable("f_sastirap_p2");
  double fmin = 1, dev = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    fmin = std::min(fmin, f[k]);
    dev = std::max(dev, std::abs(p2[k] - xs[k]));
  }
  const double mean_sa = out.summary["f_sastirap"]["mean_fidelity"].get<double>();
  const double mean_st = out.summary["f_stirap"]["mean_fidelity"].get<double>();
  r.check(xs.size() == 11 && fmin >= 0.99, fmt("f-saSTIRAP min F over %zu x points = %.11f >= 0.99", xs.size(), fmin));
  r.check(mean_sa - mean_st >= 0.05,
          fmt("f-STIRAP mean F = %.5f, lower than f-saSTIRAP (%.11f) by %.5f >= 0.05", mean_st, mean_sa,
              mean_sa - mean_st));
  r.check(dev < 0.01, fmt("f-saSTIRAP max |p2(x) - x| = %.2e < 0.01", dev));
  const double area = out.summary["full_stirap_area[rad]"].get<double>();
  r.check(std::abs(area - 5 * kPi) <= 0.5 * kPi, fmt("full-STIRAP area %.4f rad within 10%% of 5 pi", area));
  r.check(s < 120, fmt("runtime %.2f s < 120 s", s));
}

// 6 ------------------------------------------------------------------------
void robustness(Report& r) {
  const auto t0 = Clock::now();
  const JobConfig job = default_job("robustness");
  const CommandResult out = cmd_robustness(job);
  const double s = seconds_since(t0);
  const double omega_opt = out.summary["omega_opt[Delta]"].get<double>();
  r.check(std::abs(omega_opt - 0.24) <= 0.3 * 0.24,
          fmt("computed Omega_opt = %.5f vs cross-reference 0.24 (30%% band %.3f..%.3f)", omega_opt, 0.7 * 0.24,
              1.3 * 0.24));
  const SweepResult* surf = nullptr;
  for (const auto& [name, tab] : out.tables) {
    if (name == "delta_fa") surf = &tab;
  }
  const auto& d = surf->observable("delta_fa");
  for (std::size_t i = 0; i < surf->size(); ++i) {
    const auto idx = surf->unravel(i);
    const double sa = surf->axes[0].values[idx[0]], sp = surf->axes[1].values[idx[1]];
    if (sa == 0.0 && sp == 0.0) {
      r.check(std::abs(d[i]) <= 1e-3, fmt("(0, 0): delta F_a = %+.2e within 1e-3 of 0", d[i]));
    } else if (sa > 0.0) {
      r.check(d[i] > 0, fmt("sigma_amp=%.2f Omega_opt, sigma_phase=%.2f rad: delta F_a = %+.6f > 0", sa, sp, d[i]));
    } else {
      r.info(fmt("sigma_amp=0, sigma_phase=%.2f rad: delta F_a = %+.6f", sp, d[i]));
    }
  }
  const json& mc = out.summary["monte_carlo_check"];
  for (const char* name : {"sastirap", "pi_pulse"}) {
    const json& m = mc[name];
    r.check(m["agree_within_3se"].get<bool>(),
            fmt("%s: Gauss-Hermite %.6f vs Monte Carlo %.6f +- %.1e (%d samples)", name,
                m["gauss_hermite"].get<double>(), m["monte_carlo"].get<double>(),
                m["monte_carlo_std_error"].get<double>(), m["samples"].get<int>()));
  }
  r.check(s < 1800, fmt("runtime %.1f s < 1800 s", s));
}

// 7 ------------------------------------------------------------------------
struct HygieneCase {
  std::string name;
  std::function<Matrix3(double)> h;
  Window window;
  IntegratorConfig cfg;
  StateVector psi0;
  std::size_t oracle_steps;
};

void hygiene(Report& r) {
  std::vector<HygieneCase> cases;
  std::vector<std::shared_ptr<ProtocolDrive>> keep;
  auto add_drive = [&](const std::string& name, const ProtocolConfig& c, int level, std::size_t steps) {
    auto d = std::make_shared<ProtocolDrive>(c);
    keep.push_back(d);
    cases.push_back({name, [d](double t) { return d->hamiltonian(t); }, d->window(), d->integrator_config(),
                     basis_state(level), steps});
  };
  ProtocolConfig c = transfer_config();
  add_drive("transfer dynamical", c, 0, 40000);
  c.corrections = Corrections::constant_phase;
  c.constant_phase_offset = run_sastirap(c, basis_state(0)).constant_phase_offset;
  add_drive("transfer constant-phase", c, 0, 40000);
  c = transfer_config();
  c.backend = Backend::carrier;
  add_drive("transfer carrier", c, 0, 200000);
  add_drive("sweep saSTIRAP delta=0.1", sweep_config(0.1, 1.0 / 6), 0, 40000);
  add_drive("sweep reverse delta=0.05", sweep_config(0.05, 1.0 / 24), 2, 40000);
  c = sweep_config(0.2, 1.0 / 24);
  c.cd_mode = CdMode::off;
  c.corrections = Corrections::none;
  add_drive("sweep STIRAP delta=0.2", c, 0, 40000);
  add_drive("NOT gate f-saSTIRAP", not_gate_config(), 0, 40000);
  add_drive("NOT gate f-STIRAP", f_stirap_config(not_gate_config()), 2, 40000);
  add_drive("pi-pulse gate", pi_pulse_gate(not_gate_config()), 0, 40000);
  add_drive("ideal-direct sigma*Omega=3", [] {
    ProtocolConfig p;
    p.omega01_peak = p.omega12_peak = 3.0 / p.sigma;
    p.cd_mode = CdMode::ideal_direct;
    p.corrections = Corrections::none;
    return p;
  }(), 0, 40000);
  {
    SpectroscopyConfig s = detail::spectroscopy_base(default_job("spectroscopy-2d"));
    s.delta02 = 0.4;
    s.omega02 = 0.2;
    s.probe_detuning = 0.06;
    s.corrected = true;
    auto sp = std::make_shared<SpectroscopyConfig>(s);
    cases.push_back({"spectroscopy 01 corrected",
                     [sp](double t) { return build_carrier_hamiltonian(spectroscopy_tones(*sp, t), sp->qutrit, t); },
                     Window{0, s.run_time()}, s.integrator, basis_state(s.initial_level()), 2400000});
    s.probe = Probe::none;
    s.delta02 = 0.5;
    auto tp = std::make_shared<SpectroscopyConfig>(s);
    cases.push_back({"spectroscopy two-photon",
                     [tp](double t) { return build_carrier_hamiltonian(spectroscopy_tones(*tp, t), tp->qutrit, t); },
                     Window{0, s.run_time()}, s.integrator, basis_state(0), 40000});
  }

  for (const auto& hc : cases) {
    IntegratorConfig cfg = hc.cfg;
    cfg.sample_stride = -1;
    const Trajectory tr = integrate(hc.h, hc.psi0, hc.window, cfg);
    const Populations p = tr.final_populations();
    const Populations po = populations(propagator_oracle(hc.h, hc.window, hc.oracle_steps) * hc.psi0);
    IntegratorConfig half = hc.cfg;
    half.rel_tol /= 2;
    half.abs_tol /= 2;
    half.sample_stride = 0;
    const Populations ph = integrate(hc.h, hc.psi0, hc.window, half).final_populations();
    const Trajectory back = integrate(hc.h, tr.final_state(), Window{hc.window.end, hc.window.start}, hc.cfg);
    double d_or = 0, d_half = 0;
    for (int k = 0; k < 3; ++k) {
      d_or = std::max(d_or, std::abs(p[k] - po[k]));
      d_half = std::max(d_half, std::abs(p[k] - ph[k]));
    }
    const double norm_err = std::max(tr.max_norm_error, back.max_norm_error);
    const double overlap = std::abs(hc.psi0.dot(back.final_state()));
    r.check(norm_err < 1e-7, fmt("%s: max | |psi| - 1 | = %.1e < 1e-7", hc.name.c_str(), norm_err));
    r.check(d_or < 1e-6, fmt("%s: RK vs exponential oracle (%zu steps) = %.1e < 1e-6", hc.name.c_str(),
                             hc.oracle_steps, d_or));
    r.check(d_half < 1e-8, fmt("%s: tolerance halving = %.1e < 1e-8", hc.name.c_str(), d_half));
    r.check(overlap > 1 - 1e-7, fmt("%s: forward-backward overlap 1 - %.1e", hc.name.c_str(), 1 - overlap));
  }
}

// 8 ------------------------------------------------------------------------
void gate_structure(Report& r) {
  const ProtocolConfig c = not_gate_config();
  const GateMatrix g = reconstruct_gate_matrix(c);
  r.check(std::abs(g(0, 1)) > 0.995 && std::abs(g(1, 0)) > 0.995,
          fmt("off-diagonal |g01| = %.8f, |g10| = %.8f > 0.995", std::abs(g(0, 1)), std::abs(g(1, 0))));
  r.check(std::abs(g(0, 0)) < 0.05 && std::abs(g(1, 1)) < 0.05,
          fmt("diagonal |g00| = %.2e, |g11| = %.2e < 0.05", std::abs(g(0, 0)), std::abs(g(1, 1))));
  r.check(g.unitarity_defect < 2e-3, fmt("unitarity defect %.2e < 2e-3", g.unitarity_defect));
  r.check(g.leakage < 1e-3, fmt("leakage %.2e < 1e-3", g.leakage));
  ProtocolDrive d(c);
  const StateVector u0 = evolve_drive(d, basis_state(0)).final_state();
  const StateVector u2 = evolve_drive(d, basis_state(2)).final_state();
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> n(0.0, 1.0);
  double lin = g.linearity_residual;
  for (int k = 0; k < 8; ++k) {
    Complex a{n(rng), n(rng)}, b{n(rng), n(rng)};
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    a /= norm;
    b /= norm;
    const StateVector out = evolve_drive(d, a * basis_state(0) + b * basis_state(2)).final_state();
    lin = std::max(lin, (out - (a * u0 + b * u2)).norm());
  }
  r.check(lin < 1e-3, fmt("linearity residual on 8 random superpositions %.2e < 1e-3", lin));
  double twice_dev = 0;
  for (double x : unit_grid(11)) {
    const StateVector in = gate_input(x);
    const Populations p = populations(evolve_drive(d, evolve_drive(d, in).final_state()).final_state());
    twice_dev = std::max({twice_dev, std::abs(p.p0 - x), std::abs(p.p2 - (1 - x))});
  }
  r.check(twice_dev < 0.02, fmt("double application restores (p0, p2): max deviation %.2e < 0.02", twice_dev));
}

}  // namespace
}  // namespace qctrl

int main(int argc, char** argv) {
  using namespace qctrl;
  const std::vector<std::pair<const char*, void (*)(Report&)>> criteria = {
      {"transitionless exactness (ideal-direct CD)", transitionless},
      {"two-photon saSTIRAP transfer", transfer},
      {"Stark-shift formulas vs carrier spectroscopy", stark_formulas},
      {"detuning x amplitude sweep", sweep},
      {"fractional NOT gate", not_gate},
      {"robustness to amplitude and phase noise", robustness},
      {"numerical hygiene", hygiene},
      {"gate structure", gate_structure},
  };
  std::set<int> wanted;
  for (int k = 1; k < argc; ++k) wanted.insert(std::atoi(argv[k]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    std::printf("criterion %d: %s\n", id, criteria[i].first);
    std::fflush(stdout);
    Report r;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(r);
    } catch (const std::exception& e) {
      r.check(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %d: %s  (%.1f s)\n", id, r.passed() ? "PASS" : "FAIL", seconds_since(t0));
    std::fflush(stdout);
    failed += r.passed() ? 0 : 1;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
