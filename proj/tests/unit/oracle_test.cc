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

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "cdnwae/error.h"
#include "cdnwae/orchestration.h"
#include "unit/unit_support.h"

namespace cdnwae {
namespace {

using tests::CodeOf;
using tests::Rows;

ValidatedSnapshot Instance(const std::vector<double>& cpu,
                           const std::vector<double>& net,
                           const std::vector<std::uint64_t>& requests,
                           const Rows& rows) {
  std::vector<MachineTelemetry> telemetry;
  for (std::size_t n = 0; n < cpu.size(); ++n) {
    telemetry.push_back({MachineId{n}, cpu[n], net[n], 0});
  }
  return ValidateInstance(telemetry, requests, AssignmentMatrix::FromRows(rows));
}

TEST(ExactMinContainersTest, SingleMachineSingleType) {
  const auto result = ExactMinContainers(Instance({0.4}, {0.1}, {10}, {{0}}));
  ASSERT_TRUE(result.feasible);
  EXPECT_EQ(result.optimal.ToRows(), (Rows{{1}}));
  EXPECT_EQ(result.optimal_count, 1u);
  EXPECT_EQ(result.enumerated, 2u);
}

TEST(ExactMinContainersTest, TiesGoToSmallestEncoding) {
  const auto result =
      ExactMinContainers(Instance({0.4, 0.6}, {0.1, 0.1}, {10}, {{0}, {0}}));
  ASSERT_TRUE(result.feasible);
  EXPECT_EQ(result.optimal.ToRows(), (Rows{{1}, {0}}));
  // [[1],[0]], [[0],[1]] and [[1],[1]] all put the whole share on type 0.
  EXPECT_EQ(result.feasible_count, 3u);
}

TEST(ExactMinContainersTest, ZeroDemandNeedsNoContainers) {
  const auto result = ExactMinContainers(
      Instance({0.4, 0.6}, {0.1, 0.1}, {0, 0}, {{1, 1}, {0, 1}}));
  ASSERT_TRUE(result.feasible);
  EXPECT_EQ(result.optimal_count, 0u);
  EXPECT_EQ(result.optimal, AssignmentMatrix(2, 2));
  EXPECT_EQ(result.feasible_count, 16u);
}

TEST(ExactMinContainersTest, InfeasibleWhenBandTooTight) {
  // Demand 1:2 against machines loaded 0.9 and 0.1: the reachable type-0
  // shares are 0.09, 0.1, 0.47, 0.5, 0.53, 0.9, 0.91 and 1, none near 1/3.
  const auto s = Instance({0.9, 0.1}, {0.0, 0.0}, {1, 2}, {{1, 0}, {0, 1}});
  const auto result = ExactMinContainers(s, 0.001);
  EXPECT_FALSE(result.feasible);
  EXPECT_EQ(result.feasible_count, 0u);
  EXPECT_EQ(result.enumerated, 16u);
}

TEST(ExactMinContainersTest, RejectsLargeInstancesAndBadThreshold) {
  Rows rows(6, std::vector<int>(4, 0));
  const auto big = Instance(std::vector<double>(6, 0.1),
                            std::vector<double>(6, 0.1), {1, 1, 1, 1}, rows);
  EXPECT_EQ(CodeOf([&] { ExactMinContainers(big); }), ErrorCode::kTooLarge);
  const auto small = Instance({0.1}, {0.1}, {1}, {{1}});
  EXPECT_EQ(CodeOf([&] { ExactMinContainers(small, 0.0); }),
            ErrorCode::kInvalidArgument);
}

TEST(CheckFeasibleTest, ReportsBandAndCoverageSeparately) {
  const auto s = Instance({0.5, 0.3}, {0.0, 0.0}, {95, 5}, {{1, 0}, {1, 0}});
  const auto report = CheckFeasible(s.assignment(), s, 0.1);
  EXPECT_TRUE(report.within_band);
  EXPECT_FALSE(report.covered);
  EXPECT_FALSE(report.feasible);
  ASSERT_EQ(report.slack.size(), 2u);
  EXPECT_NEAR(report.slack[0], 0.95 - 1.0, 1e-12);
  EXPECT_NEAR(report.slack[1], 0.05, 1e-12);
  EXPECT_EQ(CodeOf([&] { CheckFeasible(AssignmentMatrix(3, 2), s, 0.1); }),
            ErrorCode::kDimensionMismatch);
}

// The oracle's counts match an independent recursive enumeration, its
// optimum is feasible and minimal, and no converged heuristic result uses
// fewer containers.
TEST(ExactMinContainersTest, MatchesReferenceEnumeration) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    const std::size_t m = 1 + rng() % 4;
    auto instance = tests::MakeRandomInstance(rng, n, m);
    const double threshold = trial % 3 == 0 ? 0.05 : 0.1;
    const auto s = Instance(instance.cpu, instance.net, instance.requests,
                            instance.assignment);
    const auto result = ExactMinContainers(s, threshold);
    const auto ref = tests::RefEnumerate(instance.cpu, instance.net,
                                         instance.requests, threshold);
    EXPECT_EQ(result.enumerated, 1u << (n * m));
    EXPECT_EQ(result.feasible_count, ref.feasible_count);
    EXPECT_EQ(result.feasible, ref.feasible_count > 0);
    if (!result.feasible) continue;
    EXPECT_EQ(static_cast<int>(result.optimal_count), ref.min_count);
    EXPECT_TRUE(CheckFeasible(result.optimal, s, threshold).feasible);
    EXPECT_TRUE(tests::RefFeasible(instance.cpu, instance.net,
                                   instance.requests, result.optimal.ToRows(),
                                   threshold));
    OrchestrationParams params;
    params.threshold = threshold;
    const auto outcome = Orchestrate(s, params);
    if (outcome.status == OrchestrationStatus::kConverged) {
      EXPECT_GE(outcome.result.Count(), result.optimal_count);
    }
  }
}

}  // namespace
}  // namespace cdnwae
