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

#include "cdnwae/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cdnwae/error.h"
#include "cdnwae/normalization.h"

namespace cdnwae {
namespace {

// Band and coverage test shared by CheckFeasible and the enumeration loop.
// `per_type` is the unnormalized X, `columns` the container count per type.
bool Feasible(const std::vector<double>& per_type,
              const std::vector<std::size_t>& columns,
              const NormalizedDistribution& demand,
              const std::vector<std::uint64_t>& requests, double threshold,
              FeasibilityReport* report) {
  const std::size_t types = per_type.size();
  double total = 0.0;
  for (double v : per_type) total += v;

  bool within_band = true;
  bool covered = true;
  if (report != nullptr) report->slack.assign(types, 0.0);
  for (std::size_t m = 0; m < types; ++m) {
    const double placed = total > 0.0 ? per_type[m] / total : 0.0;
    const double slack = demand[m] - placed;
    if (report != nullptr) report->slack[m] = slack;
    if (std::abs(slack) > threshold + kBandTolerance) within_band = false;
    if (requests[m] > 0 && columns[m] == 0) covered = false;
    if (report == nullptr && !(within_band && covered)) return false;
  }
  if (report != nullptr) {
    report->within_band = within_band;
    report->covered = covered;
    report->feasible = within_band && covered;
  }
  return within_band && covered;
}

}  // namespace

FeasibilityReport CheckFeasible(const AssignmentMatrix& matrix,
                                const ValidatedSnapshot& snapshot,
                                double threshold) {
  if (matrix.rows() != snapshot.machine_count() ||
      matrix.cols() != snapshot.type_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix shape does not match the snapshot");
  }
  FeasibilityReport report;
  const std::vector<std::uint64_t>& requests = snapshot.requests();
  if (TotalRequests(requests) == 0) {
    report.feasible = report.within_band = report.covered = true;
    report.slack.assign(matrix.cols(), 0.0);
    return report;
  }
  const std::vector<double> load =
      CombinedLoad(snapshot.cpu(), snapshot.net_out());
  const NormalizedDistribution demand = Normalize(std::span(requests));
  std::vector<std::size_t> columns(matrix.cols());
  for (std::size_t m = 0; m < matrix.cols(); ++m) {
    columns[m] = matrix.ColumnSum(m);
  }
  Feasible(LoadPerType(load, matrix), columns, demand, requests, threshold,
           &report);
  return report;
}

OracleResult ExactMinContainers(const ValidatedSnapshot& snapshot,
                                double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold must lie in (0, 1), got " +
                    std::to_string(threshold));
  }
  const std::size_t rows = snapshot.machine_count();
  const std::size_t cols = snapshot.type_count();
  const std::size_t cells = rows * cols;
  if (cells > kMaxEnumerationCells) {
    throw Error(ErrorCode::kTooLarge,
                std::to_string(rows) + "x" + std::to_string(cols) +
                    " instance exceeds the enumeration bound of " +
                    std::to_string(kMaxEnumerationCells) + " cells");
  }

  OracleResult result;
  const std::uint64_t space = std::uint64_t{1} << cells;
  result.enumerated = space;
  const std::vector<std::uint64_t>& requests = snapshot.requests();
  if (TotalRequests(requests) == 0) {
    result.feasible = true;
    result.optimal = AssignmentMatrix(rows, cols);
    result.optimal_count = 0;
    result.feasible_count = space;
    return result;
  }

  const std::vector<double> load =
      CombinedLoad(snapshot.cpu(), snapshot.net_out());
  const NormalizedDistribution demand = Normalize(std::span(requests));

  std::vector<double> per_type(cols);
  std::vector<std::size_t> columns(cols);
  std::uint64_t best_bits = 0;
  for (std::uint64_t bits = 0; bits < space; ++bits) {
    std::fill(per_type.begin(), per_type.end(), 0.0);
    std::fill(columns.begin(), columns.end(), 0);
    for (std::size_t k = 0; k < cells; ++k) {
      if ((bits >> k) & 1U) {
        per_type[k % cols] += load[k / cols];
        ++columns[k % cols];
      }
    }
    if (!Feasible(per_type, columns, demand, requests, threshold, nullptr)) {
      continue;
    }
    ++result.feasible_count;
    const auto count = static_cast<std::size_t>(std::popcount(bits));
    if (!result.feasible || count < result.optimal_count) {
      result.feasible = true;
      result.optimal_count = count;
      best_bits = bits;
    }
  }
  if (result.feasible) {
    result.optimal = AssignmentMatrix::Decode(rows, cols, best_bits);
  }
  return result;
}

}  // namespace cdnwae
