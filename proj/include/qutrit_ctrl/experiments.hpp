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

// Experiment commands and result writing.
#pragma once

#include "qutrit_ctrl/config.hpp"
#include "qutrit_ctrl/spectroscopy.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace qctrl {

struct CommandResult {
  std::string command;
  std::vector<std::pair<std::string, SweepResult>> tables;
  std::vector<std::pair<std::string, Trajectory>> trajectories;
  json summary = json::object();
};

namespace detail {

inline unsigned job_threads(const JobConfig& job) {
  return job.threads == 0 ? default_threads() : job.threads;
}

inline double option_number(const JobConfig& job, const std::string& key) {
  return job.sweep.at(key).get<double>();
}

inline std::vector<std::string> option_panels(const JobConfig& job, const std::vector<std::string>& allowed) {
  std::vector<std::string> out;
  for (const auto& p : job.sweep.at("panels")) {
    if (!p.is_string()) throw ConfigError("sweep.panels: expected strings");
    const std::string s = p.get<std::string>();
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      throw ConfigError("sweep.panels: unknown panel '" + s + "'");
    }
    out.push_back(s);
  }
  if (out.empty()) throw ConfigError("sweep.panels: at least one panel required");
  return out;
}

inline SpectroscopyConfig spectroscopy_base(const JobConfig& job) {
  SpectroscopyConfig s;
  s.qutrit = job.protocol.qutrit;
  s.probe_amplitude = option_number(job, "probe_amplitude");
  s.integrator.rel_tol = option_number(job, "rel_tol");
  s.integrator.sample_stride = option_number(job, "sample_stride");
  if (!(s.probe_amplitude > 0)) throw ConfigError("sweep.probe_amplitude: must be > 0");
  if (!(s.integrator.sample_stride > 0)) throw ConfigError("sweep.sample_stride: must be > 0");
  if (!(s.integrator.rel_tol > 0)) throw ConfigError("sweep.rel_tol: must be > 0");
  return s;
}

inline void set_probe(SpectroscopyConfig& s, const std::string& panel) {
  s.probe = panel.rfind("12", 0) == 0 ? Probe::p12 : Probe::p01;
  s.corrected = panel.find("corrected") != std::string::npos;
}

inline SweepResult gate_table(const std::vector<double>& xs) {
  SweepResult r;
  r.axes = {{"x", xs}};
  return r;
}

}  // namespace detail

// Time-averaged |1> population over (delta02, probe detuning).
inline CommandResult cmd_spectroscopy_2d(const JobConfig& job) {
  CommandResult out;
  out.command = job.command;
  const unsigned threads = detail::job_threads(job);
  SpectroscopyConfig base = detail::spectroscopy_base(job);
  base.omega02 = detail::option_number(job, "omega02");
  const auto& d02 = job.axis("delta02").values;
  const auto& det = job.axis("probe_detuning").values;
  for (const auto& panel : detail::option_panels(job, {"01", "12", "01-corrected", "12-corrected"})) {
    SweepResult r;
    r.axes = {{"delta02[Delta]", d02}, {"probe_detuning[Delta]", det}};
    r.add_observable("p1_avg");
    auto& p1 = r.observable("p1_avg");
    SpectroscopyConfig s = base;
    detail::set_probe(s, panel);
    parallel_for(r.size(), threads, [&](std::size_t i) {
      const auto idx = r.unravel(i);
      SpectroscopyConfig c = s;
      c.delta02 = d02[idx[0]];
      c.probe_detuning = det[idx[1]];
      p1[i] = spectroscopy_signal(c);
    });
    r.metadata = {{"probe", s.probe == Probe::p01 ? "0-1" : "1-2"},
                  {"initial_level", s.initial_level()},
                  {"corrected", s.corrected},
                  {"omega02[Delta]", s.omega02},
                  {"probe_amplitude[Delta]", s.probe_amplitude},
                  {"duration[1/Delta]", s.run_time()}};
    out.tables.emplace_back("spectroscopy_" + panel, std::move(r));
  }
  SweepResult curves;
  curves.axes = {{"delta02[Delta]", d02}};
  for (const char* n : {"eps01_pt[Delta]", "eps12_pt[Delta]", "eps01_exact[Delta]", "eps12_exact[Delta]"}) {
    curves.add_observable(n);
  }
  for (std::size_t k = 0; k < d02.size(); ++k) {
    const LevelShifts pt = level_shifts(base.omega02, d02[k], base.qutrit);
    const LevelShifts ex = exact_level_shifts(base.omega02, d02[k], base.qutrit);
    curves.observables[0][k] = pt.eps01();
    curves.observables[1][k] = pt.eps12();
    curves.observables[2][k] = ex.eps01();
    curves.observables[3][k] = ex.eps12();
  }
  out.tables.emplace_back("stark_curves", std::move(curves));
  return out;
}

// Probe lines vs tone amplitude, and the 0-2 two-photon line vs (delta02, Omega02).
inline CommandResult cmd_spectroscopy_amp(const JobConfig& job) {
  CommandResult out;
  out.command = job.command;
  const unsigned threads = detail::job_threads(job);
  SpectroscopyConfig base = detail::spectroscopy_base(job);
  const double delta = base.qutrit.anharmonicity;
  const double offset = detail::option_number(job, "two_photon_offset") * delta;
  base.delta02 = 0.5 * delta + offset;
  const auto& w02 = job.axis("omega02").values;
  const auto& det = job.axis("probe_detuning").values;
  const auto panels = detail::option_panels(job, {"01", "12", "02"});
  for (const auto& panel : panels) {
    SweepResult r;
    if (panel == "02") {
      const auto& d02 = job.axis("delta02").values;
      const auto& w = job.axis("omega02_two_photon").values;
      for (double v : w) {
        if (!(v > 0)) throw ConfigError("sweep.axes.omega02_two_photon: values must be > 0");
      }
      r.axes = {{"delta02[Delta]", d02}, {"omega02[Delta]", w}};
      r.add_observable("p2_avg");
      auto& p2 = r.observable("p2_avg");
      parallel_for(r.size(), threads, [&](std::size_t i) {
        const auto idx = r.unravel(i);
        SpectroscopyConfig c = base;
        c.probe = Probe::none;
        c.delta02 = d02[idx[0]];
        // Duration from the nominal (resonant) coupling so every column shares t_f.
        c.duration = kPi / std::abs(effective_coupling(w[idx[1]], 0.5 * delta, c.qutrit));
        c.omega02 = w[idx[1]];
        p2[i] = spectroscopy_signal(c);
      });
      r.metadata = {{"observed_level", 2}, {"duration", "pi/|Omega_eff| at delta02 = Delta/2"}};
    } else {
      r.axes = {{"omega02[Delta]", w02}, {"probe_detuning[Delta]", det}};
      r.add_observable("p1_avg");
      auto& p1 = r.observable("p1_avg");
      SpectroscopyConfig s = base;
      detail::set_probe(s, panel);
      parallel_for(r.size(), threads, [&](std::size_t i) {
        const auto idx = r.unravel(i);
        SpectroscopyConfig c = s;
        c.omega02 = w02[idx[0]];
        c.probe_detuning = det[idx[1]];
        p1[i] = spectroscopy_signal(c);
      });
      r.metadata = {{"probe", panel == "01" ? "0-1" : "1-2"},
                    {"initial_level", s.initial_level()},
                    {"delta02[Delta]", s.delta02},
                    {"duration[1/Delta]", s.run_time()}};
    }
    out.tables.emplace_back("spectroscopy_amp_" + panel, std::move(r));
  }
  SweepResult curves;
  curves.axes = {{"omega02[Delta]", w02}};
  for (const char* n : {"eps01_pt[Delta]", "eps12_pt[Delta]", "half_eps02_pt[Delta]", "eps01_exact[Delta]",
                        "eps12_exact[Delta]"}) {
    curves.add_observable(n);
  }
  for (std::size_t k = 0; k < w02.size(); ++k) {
    const LevelShifts pt = level_shifts(w02[k], base.delta02, base.qutrit);
    const LevelShifts ex = exact_level_shifts(w02[k], base.delta02, base.qutrit);
    curves.observables[0][k] = pt.eps01();
    curves.observables[1][k] = pt.eps12();
    curves.observables[2][k] = 0.5 * pt.eps02();
    curves.observables[3][k] = ex.eps01();
    curves.observables[4][k] = ex.eps12();
  }
  out.tables.emplace_back("stark_curves_amp", std::move(curves));
  out.summary["delta02[Delta]"] = base.delta02;
  return out;
}

inline json populations_json(const Populations& p) {
  return {{"p0", p.p0}, {"p1", p.p1}, {"p2", p.p2}};
}

// saSTIRAP population transfer with dynamical and constant-phase tones.
inline CommandResult cmd_transfer(const JobConfig& job) {
  CommandResult out;
  out.command = job.command;
  const ProtocolConfig& cfg = job.protocol;
  if (!job.sweep.at("variants").is_array()) throw ConfigError("sweep.variants: expected an array");
  json variants = json::object();
  for (const auto& v : job.sweep.at("variants")) {
    const std::string name = v.is_string() ? v.get<std::string>() : "";
    ProtocolConfig c = cfg;
    if (name == "dynamical") {
      c.corrections = Corrections::dynamical;
    } else if (name == "constant-phase") {
      c.corrections = Corrections::constant_phase;
    } else if (name == "none") {
      c.corrections = Corrections::none;
    } else if (name == "stirap") {
      c.cd_mode = CdMode::off;
      c.corrections = Corrections::none;
    } else {
      throw ConfigError("sweep.variants: unknown variant '" + name + "'");
    }
    if (c.cd_mode == CdMode::off && c.corrections != Corrections::none) {
      throw ConfigError("sweep.variants: '" + name + "' requires cd_mode != off");
    }
    const ProtocolRun run = run_protocol(c, basis_state(0));
    json s = populations_json(run.final());
    s["pulse_area01[rad]"] = run.pulse_area01;
    s["peak_tone[Delta]"] = run.peak_tone;
    s["steps"] = run.trajectory.steps;
    s["max_norm_error"] = run.trajectory.max_norm_error;
    if (std::isfinite(run.constant_phase)) s["constant_phase[rad]"] = run.constant_phase;
    s["notes"] = run.trajectory.notes;
    variants[name] = s;
    out.trajectories.emplace_back("trajectory_" + name, run.trajectory);
  }
  out.summary["variants"] = variants;
  out.summary["pulse_area_analytic[rad]"] = std::sqrt(2.0 * kPi) * cfg.sigma * cfg.omega01_peak;

  // Phase curves of the dynamical correction.
  if (cfg.cd_mode == CdMode::two_photon) {
    ProtocolConfig c = cfg;
    c.corrections = Corrections::dynamical;
    ProtocolDrive drive(c);
    const Window w = drive.window();
    const double stride = cfg.integrator.sample_stride > 0 ? cfg.integrator.sample_stride : cfg.sigma / 50.0;
    const int n = static_cast<int>(std::floor(w.duration() / stride)) + 1;
    std::vector<double> ts(n);
    for (int k = 0; k < n; ++k) ts[k] = w.start + k * stride;
    SweepResult r;
    r.axes = {{"t[1/Delta]", ts}};
    for (const char* name : {"phi01[rad]", "phi12[rad]", "phi02[rad]", "tone_magnitude[Delta]",
                             "omega01[Delta]", "omega12[Delta]"}) {
      r.add_observable(name);
    }
    for (int k = 0; k < n; ++k) {
      const PhaseTriple p = drive.phases(ts[k]);
      r.observables[0][k] = p.phi01;
      r.observables[1][k] = p.phi12;
      r.observables[2][k] = p.phi02;
      r.observables[3][k] = drive.nominal_tone(ts[k]).magnitude;
      r.observables[4][k] = drive.schedule().env01.value(ts[k]);
      r.observables[5][k] = drive.schedule().env12.value(ts[k]);
    }
    out.tables.emplace_back("phases", std::move(r));
  }

  if (job.sweep.at("carrier_check").get<bool>()) {
    ProtocolConfig c = cfg;
    c.corrections = Corrections::dynamical;
    c.backend = Backend::carrier;
    const ProtocolRun run = run_protocol(c, basis_state(0));
    out.summary["carrier_check"] = populations_json(run.final());
    out.trajectories.emplace_back("trajectory_carrier", run.trajectory);
  }
  return out;
}

// Final populations over (delta, Omega) for STIRAP, saSTIRAP and reverse saSTIRAP.
inline CommandResult cmd_sweep_delta_amp(const JobConfig& job) {
  CommandResult out;
  out.command = job.command;
  const auto& deltas = job.axis("delta").values;
  const auto& amps = job.axis("omega_peak").values;
  SweepResult r;
  r.axes = {{"delta[Delta]", deltas}, {"omega_peak[Delta]", amps}};
  r.add_observable("stirap_p2");
  r.add_observable("sastirap_p2");
  r.add_observable("reverse_sastirap_p0");
  auto& a = r.observables[0];
  auto& b = r.observables[1];
  auto& c = r.observables[2];
  ProtocolConfig base = job.protocol;
  if (base.cd_mode == CdMode::off) throw ConfigError("protocol.cd_mode: saSTIRAP requires a CD mode");
  std::vector<int> marginal(r.size(), 0);
  parallel_for(r.size(), detail::job_threads(job), [&](std::size_t i) {
    const auto idx = r.unravel(i);
    ProtocolConfig p = base;
    p.delta = deltas[idx[0]];
    p.omega01_peak = p.omega12_peak = amps[idx[1]];
    a[i] = run_stirap(p, basis_state(0)).final().p2;
    const ProtocolRun fwd = run_sastirap(p, basis_state(0));
    b[i] = fwd.final().p2;
    c[i] = run_sastirap(p, basis_state(2)).final().p0;
    marginal[i] = fwd.trajectory.notes.empty() ? 0 : 1;
  });
  int n_marginal = 0;
  for (int m : marginal) n_marginal += m;
  out.summary = {{"min_sastirap_p2", *std::min_element(b.begin(), b.end())},
                 {"min_stirap_p2", *std::min_element(a.begin(), a.end())},
                 {"points_with_notes", n_marginal}};
  out.tables.emplace_back("sweep_delta_amp", std::move(r));
  return out;
}

// Images of |0> and |2>; the scan over x follows by linearity.
struct GateImages {
  StateVector u0;
  StateVector u2;
  Trajectory from0;
};

inline GateImages gate_images(const ProtocolConfig& cfg) {
  ProtocolDrive drive(cfg);
  GateImages g;
  g.from0 = evolve_drive(drive, basis_state(0));
  g.u0 = g.from0.final_state();
  g.u2 = evolve_drive(drive, basis_state(2)).final_state();
  return g;
}

inline ProtocolConfig f_stirap_config(ProtocolConfig cfg) {
  cfg.cd_mode = CdMode::off;
  cfg.corrections = Corrections::none;
  return cfg;
}

inline CommandResult cmd_gate_scan(const JobConfig& job) {
  CommandResult out;
  out.command = job.command;
  if (!job.protocol.fractional) throw ConfigError("protocol.fractional: required for gate-scan");
  const auto& xs = job.axis("x").values;
  for (double x : xs) {
    if (x < 0 || x > 1) throw ConfigError("sweep.axes.x: values must lie in [0, 1]");
  }
  SweepResult r = detail::gate_table(xs);
  const std::vector<std::pair<std::string, ProtocolConfig>> variants = {
      {"f_sastirap", job.protocol}, {"f_stirap", f_stirap_config(job.protocol)}};
  for (const auto& [name, cfg] : variants) {
    const GateImages g = gate_images(cfg);
    const auto pts = gate_scan_from_images(g.u0, g.u2, xs);
    r.add_observable(name + "_fidelity");
    r.add_observable(name + "_p2");
    auto& f = r.observable(name + "_fidelity");
    auto& p2 = r.observable(name + "_p2");
    double mean = 0.0;
    double worst = 1.0;
    double dev = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      f[k] = pts[k].fidelity;
      p2[k] = pts[k].p2;
      mean += f[k] / static_cast<double>(pts.size());
      worst = std::min(worst, f[k]);
      dev = std::max(dev, std::abs(p2[k] - xs[k]));
    }
    const GateMatrix m = gate_from_images(g.u0, g.u2);
    out.summary[name] = {{"mean_fidelity", mean},
                         {"min_fidelity", worst},
                         {"max_abs_p2_minus_x", dev},
                         {"leakage", m.leakage},
                         {"unitarity_defect", m.unitarity_defect},
                         {"gate_fidelity_up_to_phase", gate_fidelity_up_to_phase(m.block, ideal_not())}};
    out.trajectories.emplace_back("trajectory_" + name + "_from0", g.from0);
  }
  const PulseSchedule full = stirap_schedule(job.protocol.omega01_peak, job.protocol.omega12_peak,
                                             job.protocol.sigma, job.protocol.t_s, job.protocol.window_sigmas);
  out.summary["full_stirap_area[rad]"] = pulse_area(full.env01, full.window);
  out.tables.emplace_back("gate_scan", std::move(r));
  return out;
}

// Fidelity landscape, averaged fidelity vs noise, and the saSTIRAP minus
// pi-pulse surface.
inline CommandResult cmd_robustness(const JobConfig& job) {
  CommandResult out;
  out.command = job.command;
  if (!job.protocol.fractional) throw ConfigError("protocol.fractional: required for robustness");
  const unsigned threads = detail::job_threads(job);
  const ProtocolConfig sa = job.protocol;
  const ProtocolConfig pi = pi_pulse_gate(job.protocol);
  FluctuationSpec fl = job.fluctuations;
  fl.xs = job.axis("x").values;
  for (double x : fl.xs) {
    if (x < 0 || x > 1) throw ConfigError("sweep.axes.x: values must lie in [0, 1]");
  }
  for (double s : job.axis("sigma_amp").values) {
    if (s < 0) throw ConfigError("sweep.axes.sigma_amp: values must be >= 0");
  }
  for (double s : job.axis("sigma_phase").values) {
    if (s < 0) throw ConfigError("sweep.axes.sigma_phase: values must be >= 0");
  }
  for (double s : job.axis("sigma_amp_curve").values) {
    if (s < 0) throw ConfigError("sweep.axes.sigma_amp_curve: values must be >= 0");
  }

  const double omega_opt = ProtocolDrive(sa).peak_tone_magnitude();
  out.summary["omega_opt[Delta]"] = omega_opt;
  out.summary["omega_opt_pi_pulse[Delta]"] = ProtocolDrive(pi).peak_tone_magnitude();

  const double lx = detail::option_number(job, "landscape_x");
  if (lx < 0 || lx > 1) throw ConfigError("sweep.landscape_x: must lie in [0, 1]");
  SweepResult land = fidelity_landscape(sa, job.axis("landscape_delta").values, job.axis("amp_scale").values,
                                        job.axis("phase_offset").values, {lx}, threads);
  land.metadata["x"] = lx;
  out.tables.emplace_back("landscape", std::move(land));

  auto averaged = [&](const ProtocolConfig& c, double sa_amp, double sa_phase, AveragingMethod m) {
    FluctuationSpec f = fl;
    f.sigma_amp = sa_amp;
    f.sigma_phase = sa_phase;
    f.method = m;
    return averaged_fidelity(c, f, threads);
  };

  const auto& curve = job.axis("sigma_amp_curve").values;
  SweepResult fa;
  fa.axes = {{"sigma_amp[Omega_opt]", curve}};
  fa.add_observable("fa_sastirap");
  fa.add_observable("fa_pi_pulse");
  for (std::size_t k = 0; k < curve.size(); ++k) {
    fa.observables[0][k] = averaged(sa, curve[k], 0.0, fl.method).mean;
    fa.observables[1][k] = averaged(pi, curve[k], 0.0, fl.method).mean;
  }
  out.tables.emplace_back("fa_vs_sigma_amp", std::move(fa));

  const auto& samp = job.axis("sigma_amp").values;
  const auto& sph = job.axis("sigma_phase").values;
  SweepResult surf;
  surf.axes = {{"sigma_amp[Omega_opt]", samp}, {"sigma_phase[rad]", sph}};
  surf.add_observable("fa_sastirap");
  surf.add_observable("fa_pi_pulse");
  surf.add_observable("delta_fa");
  std::size_t clipped = 0;
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i < surf.size(); ++i) {
    const auto idx = surf.unravel(i);
    const AveragedFidelity a = averaged(sa, samp[idx[0]], sph[idx[1]], fl.method);
    const AveragedFidelity b = averaged(pi, samp[idx[0]], sph[idx[1]], fl.method);
    surf.observables[0][i] = a.mean;
    surf.observables[1][i] = b.mean;
    surf.observables[2][i] = a.mean - b.mean;
    clipped += a.clipped + b.clipped;
    evaluations += a.evaluations + b.evaluations;
  }
  surf.metadata = {{"method", to_string(fl.method)}, {"nodes", fl.nodes}, {"clipped_draws", clipped},
                   {"evaluations", evaluations}};
  out.tables.emplace_back("delta_fa", std::move(surf));

  out.summary["method"] = to_string(fl.method);
  out.summary["clipped_draws"] = clipped;
  if (job.sweep.at("monte_carlo_check").get<bool>()) {
    const double sa_amp = detail::option_number(job, "monte_carlo_sigma_amp");
    const double sa_phase = detail::option_number(job, "monte_carlo_sigma_phase");
    if (sa_amp < 0 || sa_phase < 0) throw ConfigError("sweep.monte_carlo_sigma_*: must be >= 0");
    json check = json::object();
    for (const auto& [name, c] : {std::pair<std::string, ProtocolConfig>{"sastirap", sa}, {"pi_pulse", pi}}) {
      const AveragedFidelity gh = averaged(c, sa_amp, sa_phase, AveragingMethod::gauss_hermite);
      const AveragedFidelity mc = averaged(c, sa_amp, sa_phase, AveragingMethod::monte_carlo);
      check[name] = {{"gauss_hermite", gh.mean},
                     {"monte_carlo", mc.mean},
                     {"monte_carlo_std_error", mc.std_error},
                     {"samples", mc.samples},
                     {"seed", mc.seed},
                     {"clipped", mc.clipped},
                     {"agree_within_3se", std::abs(gh.mean - mc.mean) <= 3.0 * mc.std_error}};
    }
    check["sigma_amp[Omega_opt]"] = sa_amp;
    check["sigma_phase[rad]"] = sa_phase;
    out.summary["monte_carlo_check"] = check;
  }
  return out;
}

inline CommandResult run_command(const JobConfig& job) {
  if (job.command == "spectroscopy-2d") return cmd_spectroscopy_2d(job);
  if (job.command == "spectroscopy-amp") return cmd_spectroscopy_amp(job);
  if (job.command == "transfer") return cmd_transfer(job);
  if (job.command == "sweep-delta-amp") return cmd_sweep_delta_amp(job);
  if (job.command == "gate-scan") return cmd_gate_scan(job);
  if (job.command == "robustness") return cmd_robustness(job);
  throw ConfigError("command: unknown command '" + job.command + "'");
}

inline void check_finite(const CommandResult& r) {
  for (const auto& [name, t] : r.tables) {
    for (std::size_t o = 0; o < t.observables.size(); ++o) {
      for (double v : t.observables[o]) {
        if (!std::isfinite(v)) {
          throw NumericalError(name + ": non-finite value in column " + t.observable_names[o]);
        }
      }
    }
  }
}

// Writes <name>.csv per table and trajectory plus <command>.json metadata.
// CSV bytes depend only on (config, seed); timing goes to the sidecar.
inline std::vector<std::string> write_result(const CommandResult& r, const JobConfig& job,
                                             const std::filesystem::path& dir, double wall_seconds) {
  check_finite(r);
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  json tables = json::array();
  for (const auto& [name, t] : r.tables) {
    const auto path = dir / (name + ".csv");
    std::ofstream os(path, std::ios::binary);
    t.write_csv(os);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    files.push_back(path.string());
    json axes = json::array();
    for (const auto& a : t.axes) axes.push_back({{"name", a.name}, {"count", a.values.size()}});
    tables.push_back({{"name", name}, {"file", name + ".csv"}, {"axes", axes},
                      {"observables", t.observable_names}, {"metadata", t.metadata}});
  }
  json trajectories = json::array();
  for (const auto& [name, traj] : r.trajectories) {
    const auto path = dir / (name + ".csv");
    std::ofstream os(path, std::ios::binary);
    write_trajectory_csv(os, traj);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    files.push_back(path.string());
    trajectories.push_back({{"name", name}, {"file", name + ".csv"}, {"samples", traj.times.size()},
                            {"steps", traj.steps}, {"notes", traj.notes}});
  }
  json meta = {{"code_version", kCodeVersion},
               {"command", r.command},
               {"config_hash", config_hash(job)},
               {"seed", job.seed},
               {"wall_time_s", wall_seconds},
               {"units", "energies and rates in Delta, times in 1/Delta"},
               {"tables", tables},
               {"trajectories", trajectories},
               {"summary", r.summary},
               {"config", job_to_json(job)}};
  const auto path = dir / (r.command + ".json");
  std::ofstream os(path, std::ios::binary);
  os << meta.dump(2) << "\n";
  if (!os) throw std::runtime_error("cannot write " + path.string());
  files.push_back(path.string());
  return files;
}

}  // namespace qctrl
