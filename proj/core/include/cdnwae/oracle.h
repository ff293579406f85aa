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

// Exact minimum-container placement by exhaustive enumeration of every binary
// N x M matrix. Used as ground truth for the orchestration heuristic.
//
// A matrix X is feasible when, for every type m,
//   |R^N[m] - X^N[m]| <= threshold
// where X^N is the normalized per-type load (C + T)^T * X, and every type with
// nonzero demand has at least one container. With zero total demand every
// matrix is feasible.

#ifndef CDNWAE_ORACLE_H_
#define CDNWAE_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cdnwae/domain.h"

namespace cdnwae {

// 2^20 matrices.
inline constexpr std::size_t kMaxEnumerationCells = 20;

// Slack comparisons are made with this much floating-point allowance.
inline constexpr double kBandTolerance = 1e-9;

struct FeasibilityReport {
  bool feasible = false;
  bool within_band = false;
  bool covered = false;
  // R^N[m] - X^N[m] per type (zeros when there is no demand).
  std::vector<double> slack;
};

struct OracleResult {
  bool feasible = false;
  // Minimum-count feasible matrix; ties go to the smallest row-major bit
  // encoding (cell (n, m) is bit n * M + m). Meaningful only when feasible.
  AssignmentMatrix optimal;
  std::size_t optimal_count = 0;
  std::uint64_t feasible_count = 0;
  std::uint64_t enumerated = 0;
};

// Throws kDimensionMismatch when the matrix shape differs from the snapshot.
FeasibilityReport CheckFeasible(const AssignmentMatrix& matrix,
                                const ValidatedSnapshot& snapshot,
                                double threshold);

// Throws kTooLarge when N * M > kMaxEnumerationCells and kInvalidArgument
// unless 0 < threshold < 1.
OracleResult ExactMinContainers(const ValidatedSnapshot& snapshot,
                                double threshold = 0.1);

}  // namespace cdnwae

#endif  // CDNWAE_ORACLE_H_
