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

#ifndef CDNWAE_NORMALIZATION_H_
#define CDNWAE_NORMALIZATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cdnwae/domain.h"

namespace cdnwae {

// Nonnegative weights summing to one. `empty` marks the all-zero
// distribution produced when the underlying vector had no mass; its weights
// are all zero in that case.
struct NormalizedDistribution {
  std::vector<double> weights;
  bool empty = false;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
};

// x_i / sum(x). Throws kNegativeEntry for negative or non-finite input and
// kZeroSum when the sum is zero (including the empty vector).
NormalizedDistribution Normalize(std::span<const double> values);
NormalizedDistribution Normalize(std::span<const std::uint64_t> counts);

// Like Normalize, but maps a zero-sum vector to the all-zero distribution
// with `empty` set instead of throwing.
NormalizedDistribution NormalizeOrEmpty(std::span<const double> values);

// Per-machine combined load C + T. Throws kDimensionMismatch when the vectors
// differ in length and kOutOfRangeUtilization for entries outside [0, 1].
std::vector<double> CombinedLoad(std::span<const double> cpu,
                                 std::span<const double> net_out);

// D[m] = sum_n load[n] * a[n][m]: the load of every machine hosting type m
// is credited to m in full.
std::vector<double> LoadPerType(std::span<const double> load,
                                const AssignmentMatrix& assignment);

// Normalize(LoadPerType(load, assignment)); propagates kZeroSum.
NormalizedDistribution LoadDistribution(std::span<const double> load,
                                        const AssignmentMatrix& assignment);

}  // namespace cdnwae

#endif  // CDNWAE_NORMALIZATION_H_
