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

#include "cdnwae/domain.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cdnwae/error.h"

namespace cdnwae {
namespace {

constexpr std::array<std::string_view, 7> kTypeNames = {
    "small_edge", "large_edge", "vod_edge", "live_edge",
    "load_balancer", "dns", "mid_cache"};

bool InUnitInterval(double value) {
  return std::isfinite(value) && value >= 0.0 && value <= 1.0;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateMachine: return "DuplicateMachine";
    case ErrorCode::kMissingMachine: return "MissingMachine";
    case ErrorCode::kOutOfRangeUtilization: return "OutOfRangeUtilization";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonBinaryEntry: return "NonBinaryEntry";
    case ErrorCode::kZeroSum: return "ZeroSum";
    case ErrorCode::kNegativeEntry: return "NegativeEntry";
    case ErrorCode::kNoEligibleMachine: return "NoEligibleMachine";
    case ErrorCode::kNoHostingMachine: return "NoHostingMachine";
    case ErrorCode::kLastContainerGuard: return "LastContainerGuard";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kPoolExhausted: return "PoolExhausted";
    case ErrorCode::kNotAllocated: return "NotAllocated";
    case ErrorCode::kInvalidAddress: return "InvalidAddress";
    case ErrorCode::kIllegalTransition: return "IllegalTransition";
    case ErrorCode::kInvalidRecordSet: return "InvalidRecordSet";
    case ErrorCode::kMalformedPayload: return "MalformedPayload";
    case ErrorCode::kUnknownMachine: return "UnknownMachine";
    case ErrorCode::kIncompleteSnapshot: return "IncompleteSnapshot";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

FunctionType EdgeTypeAt(std::size_t index) {
  if (index >= kEdgeTypeCount) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge type index " + std::to_string(index) + " out of range");
  }
  return kEdgeTypes[index];
}

std::string_view FunctionTypeName(FunctionType type) {
  return kTypeNames[static_cast<std::size_t>(type)];
}

std::optional<FunctionType> ParseFunctionType(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<FunctionType>(i);
  }
  return std::nullopt;
}

std::uint64_t TotalRequests(std::span<const std::uint64_t> requests) {
  return std::accumulate(requests.begin(), requests.end(), std::uint64_t{0});
}

AssignmentMatrix::AssignmentMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

AssignmentMatrix AssignmentMatrix::FromRows(
    const std::vector<std::vector<int>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  AssignmentMatrix matrix(rows.size(), cols);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    if (rows[n].size() != cols) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row " + std::to_string(n) + " has " +
                      std::to_string(rows[n].size()) + " entries, expected " +
                      std::to_string(cols));
    }
    for (std::size_t m = 0; m < cols; ++m) {
      const int value = rows[n][m];
      if (value != 0 && value != 1) {
        throw Error(ErrorCode::kNonBinaryEntry,
                    "entry (" + std::to_string(n) + ", " + std::to_string(m) +
                        ") = " + std::to_string(value));
      }
      matrix.Set(n, m, value == 1);
    }
  }
  return matrix;
}

AssignmentMatrix AssignmentMatrix::Decode(std::size_t rows, std::size_t cols,
                                          std::uint64_t bits) {
  if (rows * cols > 64) {
    throw Error(ErrorCode::kTooLarge, "matrix does not fit a 64-bit encoding");
  }
  AssignmentMatrix matrix(rows, cols);
  for (std::size_t k = 0; k < rows * cols; ++k) {
    matrix.cells_[k] = static_cast<std::uint8_t>((bits >> k) & 1U);
  }
  return matrix;
}

std::uint64_t AssignmentMatrix::Encode() const {
  if (cells_.size() > 64) {
    throw Error(ErrorCode::kTooLarge, "matrix does not fit a 64-bit encoding");
  }
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    bits |= static_cast<std::uint64_t>(cells_[k]) << k;
  }
  return bits;
}

std::size_t AssignmentMatrix::ColumnSum(std::size_t col) const {
  std::size_t sum = 0;
  for (std::size_t n = 0; n < rows_; ++n) sum += cells_[n * cols_ + col];
  return sum;
}

std::size_t AssignmentMatrix::RowSum(std::size_t row) const {
  std::size_t sum = 0;
  for (std::size_t m = 0; m < cols_; ++m) sum += cells_[row * cols_ + m];
  return sum;
}

std::size_t AssignmentMatrix::Count() const {
  return static_cast<std::size_t>(
      std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

std::vector<std::vector<int>> AssignmentMatrix::ToRows() const {
  std::vector<std::vector<int>> out(rows_, std::vector<int>(cols_, 0));
  for (std::size_t n = 0; n < rows_; ++n) {
    for (std::size_t m = 0; m < cols_; ++m) out[n][m] = at(n, m) ? 1 : 0;
  }
  return out;
}

std::size_t HammingDistance(const AssignmentMatrix& a,
                            const AssignmentMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot compare matrices of different shapes");
  }
  std::size_t distance = 0;
  for (std::size_t n = 0; n < a.rows(); ++n) {
    for (std::size_t m = 0; m < a.cols(); ++m) {
      distance += a.at(n, m) != b.at(n, m) ? 1 : 0;
    }
  }
  return distance;
}

AssignmentMatrix RoundRobinAssignment(std::size_t machines, std::size_t types) {
  if (machines == 0) {
    throw Error(ErrorCode::kInvalidArgument, "at least one machine required");
  }
  AssignmentMatrix matrix(machines, types);
  for (std::size_t m = 0; m < types; ++m) matrix.Set(m % machines, m, true);
  return matrix;
}

std::vector<double> ValidatedSnapshot::cpu() const {
  std::vector<double> out;
  out.reserve(telemetry_.size());
  for (const auto& t : telemetry_) out.push_back(t.cpu_utilization);
  return out;
}

std::vector<double> ValidatedSnapshot::net_out() const {
  std::vector<double> out;
  out.reserve(telemetry_.size());
  for (const auto& t : telemetry_) out.push_back(t.net_out_utilization);
  return out;
}

ValidatedSnapshot ValidateInstance(std::span<const MachineTelemetry> telemetry,
                                   std::span<const std::uint64_t> requests,
                                   const AssignmentMatrix& assignment) {
  if (requests.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "request vector is empty");
  }
  if (assignment.cols() != requests.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "assignment has " + std::to_string(assignment.cols()) +
                    " columns, expected " + std::to_string(requests.size()));
  }
  const std::size_t machines = assignment.rows();
  if (machines == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "assignment has no rows");
  }

  std::vector<const MachineTelemetry*> by_machine(machines, nullptr);
  for (const MachineTelemetry& entry : telemetry) {
    const std::size_t index = entry.machine.index;
    if (index >= machines) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "telemetry for machine " + std::to_string(index) +
                      " but assignment has " + std::to_string(machines) +
                      " rows");
    }
    if (by_machine[index] != nullptr) {
      throw Error(ErrorCode::kDuplicateMachine,
                  "machine " + std::to_string(index) + " reported twice");
    }
    if (!InUnitInterval(entry.cpu_utilization)) {
      throw Error(ErrorCode::kOutOfRangeUtilization,
                  "machine " + std::to_string(index) + " cpu_utilization = " +
                      std::to_string(entry.cpu_utilization));
    }
    if (!InUnitInterval(entry.net_out_utilization)) {
      throw Error(ErrorCode::kOutOfRangeUtilization,
                  "machine " + std::to_string(index) +
                      " net_out_utilization = " +
                      std::to_string(entry.net_out_utilization));
    }
    by_machine[index] = &entry;
  }
  for (std::size_t n = 0; n < machines; ++n) {
    if (by_machine[n] == nullptr) {
      throw Error(ErrorCode::kMissingMachine,
                  "no telemetry for machine " + std::to_string(n));
    }
  }

  ValidatedSnapshot snapshot;
  snapshot.telemetry_.reserve(machines);
  for (const MachineTelemetry* entry : by_machine) {
    snapshot.telemetry_.push_back(*entry);
  }
  snapshot.requests_.assign(requests.begin(), requests.end());
  snapshot.assignment_ = assignment;
  return snapshot;
}

ValidatedSnapshot ValidateSnapshot(std::span<const MachineTelemetry> telemetry,
                                   const RequestVector& requests,
                                   const AssignmentMatrix& assignment) {
  return ValidateInstance(telemetry, requests, assignment);
}

}  // namespace cdnwae
