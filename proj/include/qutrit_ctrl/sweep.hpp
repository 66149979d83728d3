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

// Gridded sweep results, CSV export and a bounded deterministic worker pool.
#pragma once

#include "qutrit_ctrl/types.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace qctrl {

struct Axis {
  std::string name;  // column header, unit included, e.g. "delta[Delta]"
  std::vector<double> values;
};

// Row-major over axes (last axis fastest).
struct SweepResult {
  std::vector<Axis> axes;
  std::vector<std::string> observable_names;
  std::vector<std::vector<double>> observables;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
  }

  void add_observable(const std::string& name) {
    observable_names.push_back(name);
    observables.emplace_back(size(), 0.0);
  }

  std::vector<double>& observable(const std::string& name) {
    for (std::size_t k = 0; k < observable_names.size(); ++k) {
      if (observable_names[k] == name) return observables[k];
    }
    throw ParameterError("SweepResult: unknown observable " + name);
  }
  const std::vector<double>& observable(const std::string& name) const {
    return const_cast<SweepResult*>(this)->observable(name);
  }

  std::vector<std::size_t> unravel(std::size_t flat) const {
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      idx[a] = flat % axes[a].values.size();
      flat /= axes[a].values.size();
    }
    return idx;
  }

  void write_csv(std::ostream& os) const {
    std::vector<std::string> cols;
    for (const auto& a : axes) cols.push_back(a.name);
    for (const auto& n : observable_names) cols.push_back(n);
    for (std::size_t k = 0; k < cols.size(); ++k) os << cols[k] << (k + 1 < cols.size() ? "," : "\n");
    char buf[64];
    for (std::size_t i = 0; i < size(); ++i) {
      const auto idx = unravel(i);
      std::string line;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        std::snprintf(buf, sizeof buf, "%.17g,", axes[a].values[idx[a]]);
        line += buf;
      }
      for (std::size_t o = 0; o < observables.size(); ++o) {
        std::snprintf(buf, sizeof buf, "%.17g", observables[o][i]);
        line += buf;
        line += (o + 1 < observables.size()) ? "," : "";
      }
      os << line << "\n";
    }
  }
};

inline std::vector<double> linspace(double a, double b, int n) {
  require(n >= 1, "linspace: n must be >= 1");
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
  return v;
}

inline unsigned default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Calls fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots, which keeps output independent of scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qctrl
