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

// Core value types shared by every module: edge function types, machine
// telemetry, request vectors and the binary machine-by-type assignment
// matrix. Everything here is a plain value type.

#ifndef CDNWAE_DOMAIN_H_
#define CDNWAE_DOMAIN_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdnwae {

// The first four values are the orchestrated edge types and double as column
// indices of every per-type vector and matrix. The remaining roles exist only
// for the cost model.
enum class FunctionType : std::uint8_t {
  kSmallEdge = 0,
  kLargeEdge = 1,
  kVodEdge = 2,
  kLiveEdge = 3,
  kLoadBalancer = 4,
  kDns = 5,
  kMidCache = 6,
};

inline constexpr std::size_t kEdgeTypeCount = 4;

inline constexpr std::array<FunctionType, kEdgeTypeCount> kEdgeTypes = {
    FunctionType::kSmallEdge, FunctionType::kLargeEdge, FunctionType::kVodEdge,
    FunctionType::kLiveEdge};

constexpr bool IsEdgeType(FunctionType type) {
  return static_cast<std::size_t>(type) < kEdgeTypeCount;
}

constexpr std::size_t TypeIndex(FunctionType type) {
  return static_cast<std::size_t>(type);
}

// Throws Error(kInvalidArgument) for index >= kEdgeTypeCount.
FunctionType EdgeTypeAt(std::size_t index);

// Stable lower_snake_case names ("small_edge", "load_balancer", ...).
std::string_view FunctionTypeName(FunctionType type);
std::optional<FunctionType> ParseFunctionType(std::string_view name);

struct MachineId {
  std::size_t index = 0;

  friend auto operator<=>(const MachineId&, const MachineId&) = default;
};

struct MachineTelemetry {
  MachineId machine;
  double cpu_utilization = 0.0;
  double net_out_utilization = 0.0;
  std::int64_t period_id = 0;

  friend bool operator==(const MachineTelemetry&,
                         const MachineTelemetry&) = default;
};

// Request counts per edge type for one period, in canonical type order.
using RequestVector = std::array<std::uint64_t, kEdgeTypeCount>;

std::uint64_t TotalRequests(std::span<const std::uint64_t> requests);

// N x M binary matrix; cell (n, m) is set iff machine n runs a container of
// type m. Being binary is exactly the at-most-one-per-type constraint.
class AssignmentMatrix {
 public:
  AssignmentMatrix() = default;
  AssignmentMatrix(std::size_t rows, std::size_t cols);

  // Builds from nested rows. Throws kDimensionMismatch on ragged input and
  // kNonBinaryEntry for values other than 0 and 1.
  static AssignmentMatrix FromRows(const std::vector<std::vector<int>>& rows);

  // Row-major bit encoding: cell (n, m) is bit n * cols + m. Requires
  // rows * cols <= 64.
  static AssignmentMatrix Decode(std::size_t rows, std::size_t cols,
                                 std::uint64_t bits);
  std::uint64_t Encode() const;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool at(std::size_t row, std::size_t col) const {
    return cells_[row * cols_ + col] != 0;
  }
  void Set(std::size_t row, std::size_t col, bool value) {
    cells_[row * cols_ + col] = value ? 1 : 0;
  }

  std::size_t ColumnSum(std::size_t col) const;
  std::size_t RowSum(std::size_t row) const;
  // Total number of containers (sum of all cells).
  std::size_t Count() const;

  std::vector<std::vector<int>> ToRows() const;

  friend bool operator==(const AssignmentMatrix&,
                         const AssignmentMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

std::size_t HammingDistance(const AssignmentMatrix& a,
                            const AssignmentMatrix& b);

// Cold-start placement: one container of each type, type m on machine
// m mod rows.
AssignmentMatrix RoundRobinAssignment(std::size_t machines,
                                      std::size_t types = kEdgeTypeCount);

// Telemetry, demand and assignment for one period that passed validation.
// Telemetry is stored ordered by machine index.
class ValidatedSnapshot {
 public:
  std::size_t machine_count() const { return assignment_.rows(); }
  std::size_t type_count() const { return assignment_.cols(); }

  const std::vector<MachineTelemetry>& telemetry() const { return telemetry_; }
  const std::vector<std::uint64_t>& requests() const { return requests_; }
  const AssignmentMatrix& assignment() const { return assignment_; }

  std::vector<double> cpu() const;
  std::vector<double> net_out() const;

 private:
  friend ValidatedSnapshot ValidateInstance(
      std::span<const MachineTelemetry> telemetry,
      std::span<const std::uint64_t> requests,
      const AssignmentMatrix& assignment);

  std::vector<MachineTelemetry> telemetry_;
  std::vector<std::uint64_t> requests_;
  AssignmentMatrix assignment_;
};

// Public entry point: M is pinned to the four edge types.
// Errors: kDimensionMismatch, kDuplicateMachine, kMissingMachine,
// kOutOfRangeUtilization.
ValidatedSnapshot ValidateSnapshot(std::span<const MachineTelemetry> telemetry,
                                   const RequestVector& requests,
                                   const AssignmentMatrix& assignment);

// Same checks for an arbitrary number of types M = requests.size(). Used by
// tests and the oracle on small hand-built instances.
ValidatedSnapshot ValidateInstance(std::span<const MachineTelemetry> telemetry,
                                   std::span<const std::uint64_t> requests,
                                   const AssignmentMatrix& assignment);

}  // namespace cdnwae

#endif  // CDNWAE_DOMAIN_H_
