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

#include "cdnwae/service.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <vector>

#include "cdnwae/error.h"
#include "unit/unit_support.h"

namespace cdnwae {
namespace {

using tests::CodeOf;

ServiceConfig Config(std::optional<AssignmentMatrix> initial = std::nullopt) {
  ServiceConfig config;
  config.machine_count = 3;
  config.period_seconds = 600;
  config.initial_assignment = std::move(initial);
  return config;
}

MachineTelemetry T(std::size_t machine, double c, double t,
                   std::int64_t period) {
  return {MachineId{machine}, c, t, period};
}

// Machine 0 runs small and large, machine 1 vod, machine 2 live. Combined
// loads [0.5, 0.2, 0.25] and demand [350, 500, 75, 75] leave large 0.055
// above the band, so one large container starts on the idlest machine 1 and
// the next pass is inside the band everywhere.
class LargeEdgeGrowth : public ::testing::Test {
 protected:
  LargeEdgeGrowth()
      : service_(Config(AssignmentMatrix::FromRows(
            {{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}))) {}

  void IngestAll(std::int64_t period) {
    service_.Ingest(T(0, 0.3, 0.2, period), {200, 300, 25, 25});
    service_.Ingest(T(1, 0.1, 0.1, period), {100, 100, 25, 25});
    service_.Ingest(T(2, 0.15, 0.1, period), {50, 100, 25, 25});
  }

  WaeService service_;
};

TEST_F(LargeEdgeGrowth, NothingPublishedBeforeFirstRound) {
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_TRUE(service_.FetchAssignments(MachineId{n}).empty());
  }
  EXPECT_EQ(service_.State().round, 0u);
  EXPECT_FALSE(service_.LastRound().has_value());
  // Bootstrap addresses in (machine, type) order.
  const auto state = service_.State();
  EXPECT_EQ(state.records[1].address->ToString(), "10.20.0.3");
  EXPECT_EQ(state.pool.allocated_count(), 4u);
}

TEST_F(LargeEdgeGrowth, RoundStartsOneLargeEdgeOnMachineOne) {
  IngestAll(4);
  const auto summary = service_.RunRound(4);
  ASSERT_FALSE(summary.skipped) << summary.message;
  EXPECT_EQ(summary.round, 1u);
  EXPECT_EQ(summary.command_count, 1u);
  ASSERT_TRUE(summary.outcome.has_value());
  EXPECT_EQ(summary.outcome->status, OrchestrationStatus::kConverged);
  EXPECT_EQ(summary.outcome->iterations, 2);

  const auto commands = service_.FetchAssignments(MachineId{1});
  ASSERT_EQ(commands.size(), 1u);
  EXPECT_EQ(commands[0].action, CommandAction::kStart);
  EXPECT_EQ(commands[0].type, FunctionType::kLargeEdge);
  EXPECT_EQ(commands[0].address->ToString(), "10.20.0.6");
  EXPECT_TRUE(service_.FetchAssignments(MachineId{0}).empty());
  EXPECT_TRUE(service_.FetchAssignments(MachineId{2}).empty());
  // Repeated fetches return the same list.
  EXPECT_EQ(service_.FetchAssignments(MachineId{1}), commands);
  EXPECT_EQ(service_.State().last_period, 4);
  EXPECT_TRUE(service_.PendingPeriods().empty());
}

TEST_F(LargeEdgeGrowth, SnapshotSumsRequestsAcrossMachines) {
  IngestAll(0);
  const auto snapshot = service_.AssembleSnapshot(0);
  EXPECT_EQ(snapshot.requests(),
            (std::vector<std::uint64_t>{350, 500, 75, 75}));
  EXPECT_EQ(snapshot.cpu(), (std::vector<double>{0.3, 0.1, 0.15}));
}

TEST_F(LargeEdgeGrowth, LaterPayloadReplacesEarlier) {
  IngestAll(0);
  service_.Ingest(T(2, 0.9, 0.9, 0), {0, 0, 0, 0});
  const auto snapshot = service_.AssembleSnapshot(0);
  EXPECT_EQ(snapshot.cpu()[2], 0.9);
  EXPECT_EQ(snapshot.requests(), (std::vector<std::uint64_t>{300, 400, 50, 50}));
}

TEST_F(LargeEdgeGrowth, IncompleteSnapshotSkipsRound) {
  service_.Ingest(T(0, 0.3, 0.2, 0), {200, 300, 25, 25});
  service_.Ingest(T(2, 0.15, 0.1, 0), {50, 100, 25, 25});
  const auto before = service_.State();
  const auto summary = service_.RunRound(0);
  EXPECT_TRUE(summary.skipped);
  EXPECT_EQ(summary.skip_reason, ErrorCode::kIncompleteSnapshot);
  EXPECT_NE(summary.message.find("machine(s) 1"), std::string::npos)
      << summary.message;
  const auto after = service_.State();
  EXPECT_EQ(after.round, before.round);
  EXPECT_EQ(after.records, before.records);
  EXPECT_EQ(after.pool, before.pool);
  EXPECT_EQ(service_.PendingPeriods(), (std::vector<std::int64_t>{0}));
  EXPECT_EQ(CodeOf([&] { service_.AssembleSnapshot(0); }),
            ErrorCode::kIncompleteSnapshot);
}

TEST_F(LargeEdgeGrowth, RejectsUnknownMachineAndBadUtilization) {
  EXPECT_EQ(CodeOf([&] { service_.Ingest(T(3, 0.1, 0.1, 0), {}); }),
            ErrorCode::kUnknownMachine);
  EXPECT_EQ(CodeOf([&] { service_.Ingest(T(0, -0.1, 0.1, 0), {}); }),
            ErrorCode::kOutOfRangeUtilization);
  EXPECT_EQ(CodeOf([&] { service_.FetchAssignments(MachineId{3}); }),
            ErrorCode::kUnknownMachine);
}

TEST_F(LargeEdgeGrowth, SecondRoundOnSameDemandIsQuiet) {
  IngestAll(0);
  service_.RunRound(0);
  IngestAll(1);
  const auto summary = service_.RunRound(1);
  EXPECT_EQ(summary.round, 2u);
  EXPECT_EQ(summary.command_count, 0u);
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_TRUE(service_.FetchAssignments(MachineId{n}).empty());
  }
}

TEST(ServiceTest, MatchingDemandConvergesWithoutCommands) {
  WaeService service(Config(AssignmentMatrix::FromRows(
      {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}})));
  // Loads 0.5, 0.5, 0.5 spread D^N to [0.25, 0.25, 0.25, 0.25].
  for (std::size_t n = 0; n < 3; ++n) {
    service.Ingest(T(n, 0.25, 0.25, 0), {100, 100, 100, 100});
  }
  const auto summary = service.RunRound(0);
  EXPECT_EQ(summary.outcome->status, OrchestrationStatus::kConverged);
  EXPECT_EQ(summary.command_count, 0u);
}

TEST(ServiceTest, StreamingShiftGrowsLiveEdge) {
  WaeService service(Config());
  for (std::size_t n = 0; n < 3; ++n) {
    service.Ingest(T(n, 0.3, 0.2, 0), {30, 30, 30, 700});
  }
  const auto snapshot = service.AssembleSnapshot(0);
  const auto before = service.State();
  const auto summary = service.RunRound(0);
  std::size_t live_starts = 0;
  std::vector<AssignmentCommand> published;
  for (std::size_t n = 0; n < 3; ++n) {
    for (const auto& c : service.FetchAssignments(MachineId{n})) {
      published.push_back(c);
      if (c.type == FunctionType::kLiveEdge &&
          c.action == CommandAction::kStart) {
        ++live_starts;
      }
    }
  }
  EXPECT_GE(live_starts, 1u);
  // Same commands as orchestrating and diffing in process.
  const auto outcome = Orchestrate(snapshot, service.config().orchestration);
  EXPECT_EQ(*summary.outcome, outcome);
  auto expected = Diff(before.records, outcome.result, before.pool);
  std::stable_sort(expected.begin(), expected.end(),
                   [](const auto& a, const auto& b) {
                     return a.machine.index < b.machine.index;
                   });
  EXPECT_EQ(published, expected);
}

TEST(ServiceTest, TickRunsEachClosedPeriodOnce) {
  auto config = Config();
  config.period_seconds = 10;
  WaeService service(config);
  for (std::size_t n = 0; n < 3; ++n) {
    service.Ingest(T(n, 0.3, 0.2, 0), {10, 10, 10, 10});
  }
  EXPECT_FALSE(service.Tick(9.9).has_value());
  const auto first = service.Tick(10.0);
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(first->period, 0);
  EXPECT_FALSE(first->skipped);
  EXPECT_FALSE(service.Tick(15.0).has_value());
  const auto second = service.Tick(20.0);
  ASSERT_TRUE(second.has_value());
  EXPECT_EQ(second->period, 1);
  EXPECT_TRUE(second->skipped);
}

TEST(ServiceTest, ConfigValidation) {
  auto config = Config();
  config.machine_count = 0;
  EXPECT_EQ(CodeOf([&] { WaeService s(config); }), ErrorCode::kConfigError);
  config = Config();
  config.pool = {"10.0.0.0/29", "10.0.0.1"};
  EXPECT_EQ(CodeOf([&] { WaeService s(config); }), ErrorCode::kConfigError);
  config = Config(AssignmentMatrix(2, 4));
  EXPECT_EQ(CodeOf([&] { WaeService s(config); }), ErrorCode::kConfigError);
}

// Readers running alongside ingest and rounds always see a state in which
// the published commands match the published records.
TEST(ServiceTest, ConcurrentReadersNeverSeeTornRounds) {
  WaeService service(Config());
  std::atomic<bool> done{false};
  std::atomic<int> inconsistencies{0};
  std::thread reader([&] {
    while (!done) {
      const auto state = service.State();
      for (const auto& list : state.commands) {
        for (const auto& c : list) {
          const auto& r = state.records[c.machine.index * kEdgeTypeCount +
                                        TypeIndex(c.type)];
          const bool running = r.state == ContainerState::kRunning;
          if (running != (c.action == CommandAction::kStart) ||
              (running && r.address != c.address)) {
            ++inconsistencies;
          }
        }
      }
    }
  });
  std::mt19937_64 rng(41);
  for (std::int64_t period = 0; period < 200; ++period) {
    std::vector<std::thread> machines;
    for (std::size_t n = 0; n < 3; ++n) {
      const RequestVector r = {rng() % 1000, rng() % 1000, rng() % 1000,
                               rng() % 1000};
      const double c = static_cast<double>(rng() % 100) / 100.0;
      machines.emplace_back([&service, n, r, c, period] {
        service.Ingest(T(n, c, 1.0 - c, period), r);
      });
    }
    for (auto& t : machines) t.join();
    const auto summary = service.RunRound(period);
    EXPECT_FALSE(summary.skipped);
  }
  done = true;
  reader.join();
  EXPECT_EQ(inconsistencies.load(), 0);
  EXPECT_EQ(service.State().round, 200u);
}

}  // namespace
}  // namespace cdnwae
