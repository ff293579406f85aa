/*
Copyright 2026 The cdnwae Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Test-side reference implementations. They are written from the documented
// invariants with plain loops and long double arithmetic and deliberately
// share no code with the library.

#ifndef CDNWAE_TESTS_TEST_SUPPORT_H_
#define CDNWAE_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cdnwae/domain.h"

namespace cdnwae::tests {

using Rows = std::vector<std::vector<int>>;

inline std::string SourcePath(const std::string& relative) {
  return std::string(CDNWAE_SOURCE_DIR) + "/" + relative;
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cdnwae_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// x / sum(x) in long double.
inline std::vector<long double> RefNormalize(const std::vector<double>& x) {
  long double sum = 0;
  for (double v : x) sum += v;
  std::vector<long double> out;
  for (double v : x) out.push_back(v / sum);
  return out;
}

// Per-type load: column m collects the load of every machine hosting m.
inline std::vector<long double> RefPerType(const std::vector<double>& load,
                                           const Rows& a) {
  std::vector<long double> d(a.empty() ? 0 : a[0].size(), 0.0L);
  for (std::size_t n = 0; n < a.size(); ++n) {
    for (std::size_t m = 0; m < a[n].size(); ++m) {
      if (a[n][m] == 1) d[m] += load[n];
    }
  }
  return d;
}

// Feasibility straight from the definition: every type within the band and
// every demanded type hosted somewhere. Zero demand makes everything feasible.
inline bool RefFeasible(const std::vector<double>& cpu,
                        const std::vector<double>& net,
                        const std::vector<std::uint64_t>& requests,
                        const Rows& a, double threshold) {
  long double total_requests = 0;
  for (auto r : requests) total_requests += static_cast<long double>(r);
  if (total_requests == 0) return true;
  std::vector<double> load;
  for (std::size_t n = 0; n < cpu.size(); ++n) load.push_back(cpu[n] + net[n]);
  const auto d = RefPerType(load, a);
  long double d_total = 0;
  for (auto v : d) d_total += v;
  for (std::size_t m = 0; m < requests.size(); ++m) {
    const long double rn = requests[m] / total_requests;
    const long double xn = d_total > 0 ? d[m] / d_total : 0.0L;
    if (std::fabs(static_cast<double>(rn - xn)) > threshold + 1e-9) {
      return false;
    }
    if (requests[m] > 0) {
      int hosted = 0;
      for (const auto& row : a) hosted += row[m];
      if (hosted == 0) return false;
    }
  }
  return true;
}

// Visits every N x M binary matrix by recursion over cells.
inline void ForEachMatrix(std::size_t rows, std::size_t cols,
                          const std::function<void(const Rows&)>& visit) {
  Rows a(rows, std::vector<int>(cols, 0));
  std::function<void(std::size_t)> fill = [&](std::size_t cell) {
    if (cell == rows * cols) {
      visit(a);
      return;
    }
    for (int v : {0, 1}) {
      a[cell / cols][cell % cols] = v;
      fill(cell + 1);
    }
    a[cell / cols][cell % cols] = 0;
  };
  fill(0);
}

struct RefOracle {
  std::uint64_t feasible_count = 0;
  int min_count = -1;
};

inline RefOracle RefEnumerate(const std::vector<double>& cpu,
                              const std::vector<double>& net,
                              const std::vector<std::uint64_t>& requests,
                              double threshold) {
  RefOracle out;
  ForEachMatrix(cpu.size(), requests.size(), [&](const Rows& a) {
    if (!RefFeasible(cpu, net, requests, a, threshold)) return;
    ++out.feasible_count;
    int count = 0;
    for (const auto& row : a) {
      for (int v : row) count += v;
    }
    if (out.min_count < 0 || count < out.min_count) out.min_count = count;
  });
  return out;
}

// Random telemetry, demand and assignment for N machines and M types.
struct RandomInstance {
  std::vector<MachineTelemetry> telemetry;
  std::vector<double> cpu;
  std::vector<double> net;
  std::vector<std::uint64_t> requests;
  Rows assignment;
};

inline RandomInstance MakeRandomInstance(std::mt19937_64& rng, std::size_t n,
                                         std::size_t m) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<std::uint64_t> count(0, 5000);
  RandomInstance out;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = unit(rng);
    const double t = unit(rng);
    out.cpu.push_back(c);
    out.net.push_back(t);
    out.telemetry.push_back({MachineId{i}, c, t, 0});
  }
  for (std::size_t j = 0; j < m; ++j) {
    // A quarter of the types carry no demand.
    out.requests.push_back(unit(rng) < 0.25 ? 0 : count(rng));
  }
  out.assignment.assign(n, std::vector<int>(m, 0));
  for (auto& row : out.assignment) {
    for (int& v : row) v = bit(rng);
  }
  return out;
}

}  // namespace cdnwae::tests

#endif  // CDNWAE_TESTS_TEST_SUPPORT_H_
