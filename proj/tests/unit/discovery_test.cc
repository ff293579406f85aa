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

#include "cdnwae/discovery.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cdnwae/error.h"
#include "unit/unit_support.h"

namespace cdnwae {
namespace {

using tests::CodeOf;
using tests::Rows;

AddressPool Pool() { return AddressPool::FromStrings("10.20.0.0/24", "10.20.0.1"); }

TEST(DiscoveryTest, PausedRecordsAreCanonical) {
  const auto records = PausedRecords(2);
  ASSERT_EQ(records.size(), 8u);
  EXPECT_EQ(records[5].machine, MachineId{1});
  EXPECT_EQ(records[5].type, FunctionType::kLargeEdge);
  EXPECT_EQ(CheckRecords(records), 2u);
  EXPECT_EQ(RunningMatrix(records), AssignmentMatrix(2, 4));
}

TEST(DiscoveryTest, CheckRecordsRejectsInconsistentSets) {
  auto records = PausedRecords(2);
  records[0].address = Ipv4Address::Parse("10.20.0.2");
  EXPECT_EQ(CodeOf([&] { CheckRecords(records); }),
            ErrorCode::kInvalidRecordSet);
  records = PausedRecords(2);
  std::swap(records[0], records[1]);
  EXPECT_EQ(CodeOf([&] { CheckRecords(records); }),
            ErrorCode::kInvalidRecordSet);
  records = PausedRecords(2);
  records.pop_back();
  EXPECT_EQ(CodeOf([&] { CheckRecords(records); }),
            ErrorCode::kInvalidRecordSet);
}

TEST(DiscoveryTest, BootstrapStartsInitialAssignment) {
  auto pool = Pool();
  const auto records = Bootstrap(RoundRobinAssignment(3), pool);
  EXPECT_EQ(RunningMatrix(records), RoundRobinAssignment(3));
  // (machine, type) order: m0 small, m0 live, m1 large, m2 vod.
  EXPECT_EQ(records[0].address->ToString(), "10.20.0.2");
  EXPECT_EQ(records[3].address->ToString(), "10.20.0.3");
  EXPECT_EQ(records[5].address->ToString(), "10.20.0.4");
  EXPECT_EQ(records[10].address->ToString(), "10.20.0.5");
  EXPECT_EQ(pool.allocated_count(), 4u);
}

TEST(DiscoveryTest, MoveReusesReleasedAddress) {
  auto pool = Pool();
  const auto records = Bootstrap(AssignmentMatrix::FromRows({{1, 0, 0, 0},
                                                             {0, 0, 0, 0}}),
                                 pool);
  const auto desired = AssignmentMatrix::FromRows({{0, 0, 0, 0}, {1, 0, 0, 0}});
  const auto commands = Diff(records, desired, pool);
  ASSERT_EQ(commands.size(), 2u);
  EXPECT_EQ(commands[0].action, CommandAction::kPause);
  EXPECT_EQ(commands[0].machine, MachineId{0});
  EXPECT_FALSE(commands[0].address.has_value());
  EXPECT_EQ(commands[1].action, CommandAction::kStart);
  EXPECT_EQ(commands[1].machine, MachineId{1});
  EXPECT_EQ(commands[1].address->ToString(), "10.20.0.2");
  // Diff leaves the pool alone.
  EXPECT_EQ(pool.allocated_count(), 1u);
  const auto next = Apply(records, commands, pool);
  EXPECT_EQ(RunningMatrix(next), desired);
  EXPECT_EQ(pool.OwnerOf(Ipv4Address::Parse("10.20.0.2"))->machine, MachineId{1});
}

TEST(DiscoveryTest, IdenticalMatrixYieldsNoCommands) {
  auto pool = Pool();
  const auto records = Bootstrap(RoundRobinAssignment(3), pool);
  EXPECT_TRUE(Diff(records, RoundRobinAssignment(3), pool).empty());
  EXPECT_EQ(CodeOf([&] { Diff(records, AssignmentMatrix(2, 4), pool); }),
            ErrorCode::kDimensionMismatch);
}

TEST(DiscoveryTest, IllegalTransitionsLeaveStateUntouched) {
  auto pool = Pool();
  const auto records = Bootstrap(RoundRobinAssignment(2), pool);
  const AddressPool before = pool;
  // The first command is legal; the second starts a running container.
  const std::vector<AssignmentCommand> start_running = {
      {MachineId{1}, FunctionType::kSmallEdge, CommandAction::kStart, {}},
      {MachineId{0}, FunctionType::kSmallEdge, CommandAction::kStart, {}}};
  EXPECT_EQ(CodeOf([&] { Apply(records, start_running, pool); }),
            ErrorCode::kIllegalTransition);
  EXPECT_EQ(pool, before);
  const std::vector<AssignmentCommand> pause_paused = {
      {MachineId{1}, FunctionType::kSmallEdge, CommandAction::kPause, {}}};
  EXPECT_EQ(CodeOf([&] { Apply(records, pause_paused, pool); }),
            ErrorCode::kIllegalTransition);
  EXPECT_EQ(pool, before);
}

TEST(DiscoveryTest, DiffFailsWhenPoolRunsOut) {
  auto pool = AddressPool::FromStrings("10.0.0.0/30", "10.0.0.1");
  const auto records = PausedRecords(1);
  EXPECT_EQ(CodeOf([&] {
              Diff(records, AssignmentMatrix::FromRows({{1, 1, 0, 0}}), pool);
            }),
            ErrorCode::kPoolExhausted);
}

// Random matrix pairs: the diff has exactly Hamming-distance many commands
// with pauses first, applying it yields the desired matrix, running
// containers hold distinct addresses owned by themselves, and the pool
// conserves its capacity.
TEST(DiscoveryTest, RandomMatrixPairs) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    auto pool = Pool();
    const std::size_t capacity = pool.capacity();
    const auto from = AssignmentMatrix::Decode(n, 4, rng());
    const auto to = AssignmentMatrix::Decode(n, 4, rng());
    const auto records = Bootstrap(from, pool);
    const auto commands = Diff(records, to, pool);
    EXPECT_EQ(commands.size(), HammingDistance(from, to));
    bool seen_start = false;
    for (const auto& c : commands) {
      if (c.action == CommandAction::kStart) {
        seen_start = true;
        EXPECT_TRUE(c.address.has_value());
      } else {
        EXPECT_FALSE(seen_start) << "pause after start";
      }
    }
    const auto next = Apply(records, commands, pool);
    EXPECT_EQ(RunningMatrix(next), to);
    std::set<Ipv4Address> addresses;
    for (const auto& r : next) {
      if (r.state != ContainerState::kRunning) continue;
      ASSERT_TRUE(r.address.has_value());
      EXPECT_TRUE(addresses.insert(*r.address).second);
      const auto owner = pool.OwnerOf(*r.address);
      ASSERT_TRUE(owner.has_value());
      EXPECT_EQ(owner->machine, r.machine);
      EXPECT_EQ(owner->type, r.type);
    }
    EXPECT_EQ(pool.allocated_count(), to.Count());
    EXPECT_EQ(pool.capacity(), capacity);
    EXPECT_TRUE(Diff(next, to, pool).empty());
  }
}

}  // namespace
}  // namespace cdnwae
