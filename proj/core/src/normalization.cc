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

#include "cdnwae/normalization.h"

#include <cmath>
#include <string>

#include "cdnwae/error.h"

namespace cdnwae {
namespace {

double CheckedSum(std::span<const double> values) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw Error(ErrorCode::kNegativeEntry,
                  "entry " + std::to_string(i) + " = " +
                      std::to_string(values[i]));
    }
    sum += values[i];
  }
  return sum;
}

NormalizedDistribution Divide(std::span<const double> values, double sum) {
  NormalizedDistribution out;
  out.weights.reserve(values.size());
  for (double v : values) out.weights.push_back(v / sum);
  return out;
}

}  // namespace

NormalizedDistribution Normalize(std::span<const double> values) {
  const double sum = CheckedSum(values);
  if (sum == 0.0) {
    throw Error(ErrorCode::kZeroSum, "cannot normalize a zero-sum vector");
  }
  return Divide(values, sum);
}

NormalizedDistribution Normalize(std::span<const std::uint64_t> counts) {
  std::vector<double> values(counts.begin(), counts.end());
  return Normalize(std::span<const double>(values));
}

NormalizedDistribution NormalizeOrEmpty(std::span<const double> values) {
  const double sum = CheckedSum(values);
  if (sum == 0.0) {
    NormalizedDistribution out;
    out.weights.assign(values.size(), 0.0);
    out.empty = true;
    return out;
  }
  return Divide(values, sum);
}

std::vector<double> CombinedLoad(std::span<const double> cpu,
                                 std::span<const double> net_out) {
  if (cpu.size() != net_out.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cpu has " + std::to_string(cpu.size()) +
                    " machines, net_out has " +
                    std::to_string(net_out.size()));
  }
  std::vector<double> load(cpu.size());
  for (std::size_t n = 0; n < cpu.size(); ++n) {
    for (double v : {cpu[n], net_out[n]}) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw Error(ErrorCode::kOutOfRangeUtilization,
                    "machine " + std::to_string(n) + " value " +
                        std::to_string(v));
      }
    }
    load[n] = cpu[n] + net_out[n];
  }
  return load;
}

std::vector<double> LoadPerType(std::span<const double> load,
                                const AssignmentMatrix& assignment) {
  if (load.size() != assignment.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "load has " + std::to_string(load.size()) +
                    " machines, assignment has " +
                    std::to_string(assignment.rows()) + " rows");
  }
  std::vector<double> per_type(assignment.cols(), 0.0);
  for (std::size_t n = 0; n < assignment.rows(); ++n) {
    for (std::size_t m = 0; m < assignment.cols(); ++m) {
      if (assignment.at(n, m)) per_type[m] += load[n];
    }
  }
  return per_type;
}

NormalizedDistribution LoadDistribution(std::span<const double> load,
                                        const AssignmentMatrix& assignment) {
  const std::vector<double> per_type = LoadPerType(load, assignment);
  return Normalize(std::span<const double>(per_type));
}

}  // namespace cdnwae
