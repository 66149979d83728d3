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

// qutrit-ctrl command-line driver.

#include "qutrit_ctrl/qutrit_ctrl.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run_job(const std::string& command, const std::string& config_path, const std::string& out_dir,
            int threads, long long seed, bool print_only) {
  qctrl::JobConfig job = qctrl::load_config(config_path);
  if (job.command != command) {
    throw qctrl::ConfigError("command: config is for '" + job.command + "' but '" + command +
                             "' was requested");
  }
  if (!out_dir.empty()) job.output = out_dir;
  if (threads >= 0) job.threads = static_cast<unsigned>(threads);
  if (seed >= 0) {
    job.seed = static_cast<std::uint64_t>(seed);
    job.fluctuations.seed = job.seed;
  }
  if (print_only) {
    std::cout << qctrl::job_to_json(job).dump(2) << "\n";
    return kExitOk;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const qctrl::CommandResult result = qctrl::run_command(job);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto files = qctrl::write_result(result, job, job.output, wall);
  for (const auto& f : files) std::cout << f << "\n";
  std::cerr << command << ": " << wall << " s, config " << qctrl::config_hash(job) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superadiabatic STIRAP qutrit simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qctrl::kCodeVersion);

  std::string config_path;
  std::string out_dir;
  int threads = -1;
  long long seed = -1;
  bool print_only = false;
  for (const auto& name : qctrl::command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON job file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the job's output)");
    sub->add_option("--threads", threads, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "RNG seed (overrides the job's seed)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--print-config", print_only, "print the resolved job and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run_job(command, config_path, out_dir, threads, seed, print_only);
  } catch (const qctrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qctrl::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qctrl::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
