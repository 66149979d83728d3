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

// JSON job configuration: strict schema validation, command presets and
// canonical serialization.
#pragma once

#include "qutrit_ctrl/protocols.hpp"
#include "qutrit_ctrl/robustness.hpp"
#include "qutrit_ctrl/sweep.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace qctrl {

using nlohmann::json;

inline constexpr const char* kCodeVersion = "0.1.0";

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectroscopy-2d", "spectroscopy-amp", "transfer",
                                                 "sweep-delta-amp", "gate-scan", "robustness"};
  return names;
}

struct AxisSpec {
  std::string name;
  std::vector<double> values;
};

struct JobConfig {
  std::string command;
  ProtocolConfig protocol;
  json sweep = json::object();  // command options, axes resolved into `axes`
  std::vector<AxisSpec> axes;
  FluctuationSpec fluctuations;
  std::string output = "out";
  std::uint64_t seed = 1;
  unsigned threads = 0;

  const AxisSpec& axis(const std::string& name) const {
    for (const auto& a : axes) {
      if (a.name == name) return a;
    }
    throw ConfigError("sweep.axes: missing axis '" + name + "'");
  }
};

namespace detail {

inline std::string join_path(const std::string& a, const std::string& b) {
  return a.empty() ? b : a + "." + b;
}

inline void reject_unknown(const json& obj, const std::string& path,
                           const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(join_path(path, it.key()) + ": unknown field");
    }
  }
}

inline double get_number(const json& obj, const std::string& key, const std::string& path,
                         double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join_path(path, key) + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(join_path(path, key) + ": must be finite");
  return d;
}

inline std::string get_string(const json& obj, const std::string& key, const std::string& path,
                              const std::string& fallback, const std::set<std::string>& choices) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join_path(path, key) + ": expected a string");
  const std::string s = v.get<std::string>();
  if (!choices.empty() && !choices.count(s)) {
    std::string opts;
    for (const auto& c : choices) opts += (opts.empty() ? "" : ", ") + c;
    throw ConfigError(join_path(path, key) + ": '" + s + "' is not one of {" + opts + "}");
  }
  return s;
}

inline std::uint64_t get_uint(const json& obj, const std::string& key, const std::string& path,
                              std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(join_path(path, key) + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline bool get_bool(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(join_path(path, key) + ": expected a boolean");
  return obj.at(key).get<bool>();
}

inline const char* corrections_name(Corrections c) {
  return c == Corrections::none ? "none"
                                : (c == Corrections::constant_phase ? "constant-phase" : "dynamical");
}
inline const char* cd_mode_name(CdMode m) {
  return m == CdMode::off ? "off" : (m == CdMode::ideal_direct ? "ideal-direct" : "two-photon");
}
inline const char* backend_name(Backend b) {
  return b == Backend::effective ? "effective" : "carrier";
}

}  // namespace detail

// Command presets: the parameter sets of the reference experiments.
inline ProtocolConfig preset_protocol(const std::string& command) {
  ProtocolConfig p;
  if (command == "transfer") {
    p.qutrit.lambda = std::sqrt(2.0);
    p.integrator.sample_stride = p.sigma / 50.0;
  } else if (command == "sweep-delta-amp") {
    p.qutrit.lambda = 1.0;
    p.sigma = 80.0;
    p.t_s = -160.0;
    p.omega01_peak = p.omega12_peak = 1.0 / 6.0;
  } else if (command == "gate-scan" || command == "robustness") {
    p = not_gate_config();
    if (command == "gate-scan") p.integrator.sample_stride = p.sigma / 50.0;
  } else if (command == "spectroscopy-2d") {
    p.qutrit.lambda = 1.0;
  } else if (command == "spectroscopy-amp") {
    p.qutrit.lambda = std::sqrt(2.0);
  }
  return p;
}

inline json default_axes(const std::string& command) {
  auto ax = [](const std::string& n, double a, double b, int c) {
    return json{{"name", n}, {"start", a}, {"stop", b}, {"count", c}};
  };
  if (command == "spectroscopy-2d") {
    return json::array({ax("delta02", 0.3, 0.7, 101), ax("probe_detuning", -0.1, 0.1, 101)});
  }
  if (command == "spectroscopy-amp") {
    return json::array({ax("omega02", 0.0, 0.2, 101), ax("probe_detuning", -0.1, 0.1, 101),
                        ax("delta02", 0.48, 0.52, 101), ax("omega02_two_photon", 0.02, 0.2, 101)});
  }
  if (command == "sweep-delta-amp") {
    return json::array({ax("delta", 0.0, 0.2, 41), ax("omega_peak", 1.0 / 24.0, 1.0 / 6.0, 41)});
  }
  if (command == "gate-scan") return json::array({ax("x", 0.0, 1.0, 11)});
  if (command == "robustness") {
    return json::array({ax("x", 0.0, 1.0, 11), ax("amp_scale", 0.5, 1.5, 21),
                        ax("phase_offset", -kPi / 4, kPi / 4, 21),
                        json{{"name", "landscape_delta"}, {"values", {0.02, 0.1}}},
                        ax("sigma_amp_curve", 0.0, 0.1, 11),
                        json{{"name", "sigma_amp"}, {"values", {0.0, 0.02, 0.05, 0.1}}},
                        json{{"name", "sigma_phase"}, {"values", {0.0, 0.05, 0.1}}}});
  }
  return json::array();
}

// Command-specific options and their defaults (axes excluded).
inline json default_options(const std::string& command) {
  if (command == "spectroscopy-2d") {
    return {{"omega02", 0.2}, {"probe_amplitude", 0.001},
            {"panels", {"01", "12", "01-corrected", "12-corrected"}},
            {"sample_stride", 0.25}, {"rel_tol", 2e-10}};
  }
  if (command == "spectroscopy-amp") {
    return {{"two_photon_offset", 1.0 / 60.0}, {"probe_amplitude", 0.001},
            {"panels", {"01", "12", "02"}}, {"sample_stride", 0.25}, {"rel_tol", 2e-10}};
  }
  if (command == "transfer") return {{"variants", {"dynamical", "constant-phase"}}, {"carrier_check", false}};
  if (command == "sweep-delta-amp") return json::object();
  if (command == "gate-scan") return json::object();
  if (command == "robustness") {
    return {{"landscape_x", 0.5}, {"monte_carlo_check", true}, {"monte_carlo_sigma_amp", 0.05}, {"monte_carlo_sigma_phase", 0.05}};
  }
  return json::object();
}

inline ProtocolConfig parse_protocol(const json& j, const std::string& command) {
  const std::string path = "protocol";
  detail::reject_unknown(j, path,
                         {"lambda", "anharmonicity", "omega01", "omega01_peak", "omega12_peak", "sigma",
                          "t_s", "window_sigmas", "delta", "delta02", "corrections", "cd_mode",
                          "backend", "fractional", "integrator"});
  ProtocolConfig p = preset_protocol(command);
  using detail::get_number;
  p.qutrit.lambda = get_number(j, "lambda", path, p.qutrit.lambda);
  p.qutrit.anharmonicity = get_number(j, "anharmonicity", path, p.qutrit.anharmonicity);
  p.qutrit.omega01 = get_number(j, "omega01", path, p.qutrit.omega01);
  p.omega01_peak = get_number(j, "omega01_peak", path, p.omega01_peak);
  p.omega12_peak = get_number(j, "omega12_peak", path, p.omega12_peak);
  p.sigma = get_number(j, "sigma", path, p.sigma);
  p.t_s = get_number(j, "t_s", path, j.contains("sigma") && !j.contains("t_s") ? -2.0 * p.sigma : p.t_s);
  p.window_sigmas = get_number(j, "window_sigmas", path, p.window_sigmas);
  p.delta = get_number(j, "delta", path, p.delta);
  p.delta02 = get_number(j, "delta02", path, p.delta02);
  const std::string corr = detail::get_string(j, "corrections", path, detail::corrections_name(p.corrections),
                                              {"none", "constant-phase", "dynamical"});
  p.corrections = corr == "none" ? Corrections::none
                                 : (corr == "constant-phase" ? Corrections::constant_phase
                                                             : Corrections::dynamical);
  const std::string mode = detail::get_string(j, "cd_mode", path, detail::cd_mode_name(p.cd_mode),
                                              {"off", "ideal-direct", "two-photon"});
  p.cd_mode = mode == "off" ? CdMode::off
                            : (mode == "ideal-direct" ? CdMode::ideal_direct : CdMode::two_photon);
  const std::string be = detail::get_string(j, "backend", path, detail::backend_name(p.backend),
                                            {"effective", "carrier"});
  p.backend = be == "effective" ? Backend::effective : Backend::carrier;
  if (j.contains("fractional")) {
    const json& f = j.at("fractional");
    if (f.is_null()) {
      p.fractional.reset();
    } else {
      const std::string fp = "protocol.fractional";
      detail::reject_unknown(f, fp, {"eta", "tau"});
      FractionalParams fr = p.fractional.value_or(FractionalParams{kPi / 4, 10.0 * p.sigma});
      fr.eta = get_number(f, "eta", fp, fr.eta);
      fr.tau = get_number(f, "tau", fp, fr.tau);
      if (fr.eta < 0 || fr.eta > kPi / 2) throw ConfigError(fp + ".eta: must lie in [0, pi/2]");
      p.fractional = fr;
    }
  }
  if (j.contains("integrator")) {
    const json& ic = j.at("integrator");
    const std::string ip = "protocol.integrator";
    detail::reject_unknown(ic, ip, {"rel_tol", "abs_tol", "max_step", "sample_stride"});
    p.integrator.rel_tol = get_number(ic, "rel_tol", ip, p.integrator.rel_tol);
    p.integrator.abs_tol = get_number(ic, "abs_tol", ip, p.integrator.abs_tol);
    if (ic.contains("max_step")) p.integrator.max_step = get_number(ic, "max_step", ip, 0.0);
    p.integrator.sample_stride = get_number(ic, "sample_stride", ip, p.integrator.sample_stride);
  }
  if (p.corrections != Corrections::none && p.cd_mode == CdMode::off) {
    throw ConfigError("protocol.corrections: '" + corr + "' requires cd_mode != off");
  }
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  } catch (const SingularityError& e) {
    throw ConfigError(std::string("protocol.delta02: ") + e.what());
  }
  return p;
}

inline json protocol_to_json(const ProtocolConfig& p) {
  json j = {{"lambda", p.qutrit.lambda},
            {"anharmonicity", p.qutrit.anharmonicity},
            {"omega01", p.qutrit.omega01},
            {"omega01_peak", p.omega01_peak},
            {"omega12_peak", p.omega12_peak},
            {"sigma", p.sigma},
            {"t_s", p.t_s},
            {"window_sigmas", p.window_sigmas},
            {"delta", p.delta},
            {"delta02", p.delta02},
            {"corrections", detail::corrections_name(p.corrections)},
            {"cd_mode", detail::cd_mode_name(p.cd_mode)},
            {"backend", detail::backend_name(p.backend)}};
  j["fractional"] = p.fractional ? json{{"eta", p.fractional->eta}, {"tau", p.fractional->tau}} : json(nullptr);
  json ic = {{"rel_tol", p.integrator.rel_tol},
             {"abs_tol", p.integrator.abs_tol},
             {"sample_stride", p.integrator.sample_stride}};
  if (std::isfinite(p.integrator.max_step)) ic["max_step"] = p.integrator.max_step;
  j["integrator"] = ic;
  return j;
}

inline std::vector<AxisSpec> parse_axes(const json& arr) {
  if (!arr.is_array()) throw ConfigError("sweep.axes: expected an array");
  std::vector<AxisSpec> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string path = "sweep.axes[" + std::to_string(k) + "]";
    const json& a = arr[k];
    if (!a.is_object() || !a.contains("name")) throw ConfigError(path + ".name: missing required field");
    AxisSpec spec;
    spec.name = detail::get_string(a, "name", path, "", {});
    if (a.contains("values")) {
      detail::reject_unknown(a, path, {"name", "values"});
      if (!a.at("values").is_array() || a.at("values").empty()) {
        throw ConfigError(path + ".values: expected a non-empty array of numbers");
      }
      for (const auto& v : a.at("values")) {
        if (!v.is_number()) throw ConfigError(path + ".values: expected numbers");
        spec.values.push_back(v.get<double>());
      }
    } else {
      detail::reject_unknown(a, path, {"name", "start", "stop", "count"});
      for (const char* key : {"start", "stop", "count"}) {
        if (!a.contains(key)) throw ConfigError(path + "." + key + ": missing required field");
      }
      const double start = detail::get_number(a, "start", path, 0.0);
      const double stop = detail::get_number(a, "stop", path, 0.0);
      const std::uint64_t count = detail::get_uint(a, "count", path, 0);
      if (count < 1) throw ConfigError(path + ".count: must be >= 1");
      spec.values = linspace(start, stop, static_cast<int>(count));
    }
    out.push_back(spec);
  }
  return out;
}

inline FluctuationSpec parse_fluctuations(const json& j, std::uint64_t seed) {
  const std::string path = "fluctuations";
  detail::reject_unknown(j, path, {"method", "nodes", "samples", "clip_sigmas"});
  FluctuationSpec f;
  const std::string m = detail::get_string(j, "method", path, "gauss-hermite", {"gauss-hermite", "monte-carlo"});
  f.method = m == "gauss-hermite" ? AveragingMethod::gauss_hermite : AveragingMethod::monte_carlo;
  f.nodes = static_cast<int>(detail::get_uint(j, "nodes", path, 15));
  f.samples = detail::get_uint(j, "samples", path, 2000);
  f.clip_sigmas = detail::get_number(j, "clip_sigmas", path, 4.0);
  f.seed = seed;
  try {
    f.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return f;
}

inline json fluctuations_to_json(const FluctuationSpec& f) {
  return {{"method", to_string(f.method)},
          {"nodes", f.nodes},
          {"samples", f.samples},
          {"clip_sigmas", f.clip_sigmas}};
}

inline JobConfig parse_job(const json& j) {
  detail::reject_unknown(j, "", {"command", "protocol", "sweep", "fluctuations", "output", "seed", "threads"});
  for (const char* key : {"command", "protocol"}) {
    if (!j.contains(key)) throw ConfigError(std::string(key) + ": missing required field");
  }
  JobConfig c;
  const std::set<std::string> cmds(command_names().begin(), command_names().end());
  c.command = detail::get_string(j, "command", "", "", cmds);
  c.seed = detail::get_uint(j, "seed", "", 1);
  c.threads = static_cast<unsigned>(detail::get_uint(j, "threads", "", 0));
  if (j.contains("output")) c.output = detail::get_string(j, "output", "", "out", {});
  c.protocol = parse_protocol(j.at("protocol"), c.command);

  json options = default_options(c.command);
  json axes = default_axes(c.command);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    std::set<std::string> allowed = {"axes"};
    for (auto it = options.begin(); it != options.end(); ++it) allowed.insert(it.key());
    detail::reject_unknown(s, "sweep", allowed);
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (it.key() == "axes") continue;
      const json& def = options[it.key()];
      if (def.is_number() && !it.value().is_number()) throw ConfigError("sweep." + it.key() + ": expected a number");
      if (def.is_boolean() && !it.value().is_boolean()) throw ConfigError("sweep." + it.key() + ": expected a boolean");
      if (def.is_array() && !it.value().is_array()) throw ConfigError("sweep." + it.key() + ": expected an array");
      options[it.key()] = it.value();
    }
    if (s.contains("axes")) {
      // Axes given by the user replace the defaults of the same name.
      std::vector<AxisSpec> user = parse_axes(s.at("axes"));
      std::vector<AxisSpec> defaults = parse_axes(axes);
      std::set<std::string> known;
      for (const auto& d : defaults) known.insert(d.name);
      for (const auto& u : user) {
        if (!known.count(u.name)) throw ConfigError("sweep.axes: unknown axis '" + u.name + "' for " + c.command);
        for (auto& d : defaults) {
          if (d.name == u.name) d = u;
        }
      }
      c.axes = defaults;
    }
  }
  if (c.axes.empty()) c.axes = parse_axes(axes);
  c.sweep = options;
  c.fluctuations = parse_fluctuations(j.value("fluctuations", json::object()), c.seed);
  return c;
}

inline JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return parse_job(j);
}

// Fully resolved, canonical form (defaults made explicit).
inline json job_to_json(const JobConfig& c) {
  json axes = json::array();
  for (const auto& a : c.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
  json sweep = c.sweep;
  sweep["axes"] = axes;
  return {{"command", c.command},
          {"protocol", protocol_to_json(c.protocol)},
          {"sweep", sweep},
          {"fluctuations", fluctuations_to_json(c.fluctuations)},
          {"output", c.output},
          {"seed", c.seed},
          {"threads", c.threads}};
}

// FNV-1a 64 over the canonical dump, excluding run-environment fields.
inline std::string config_hash(const JobConfig& c) {
  json j = job_to_json(c);
  j.erase("threads");
  j.erase("output");
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qctrl
