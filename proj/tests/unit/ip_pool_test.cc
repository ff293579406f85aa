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

#include "cdnwae/ip_pool.h"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "cdnwae/error.h"
#include "unit/unit_support.h"

namespace cdnwae {
namespace {

using tests::CodeOf;

ContainerKey Key(std::size_t machine, FunctionType type) {
  return {MachineId{machine}, type};
}

Ipv4Address Addr(const char* text) { return Ipv4Address::Parse(text); }

TEST(Ipv4AddressTest, ParsesAndPrints) {
  EXPECT_EQ(Addr("10.20.0.7").value, (10u << 24) | (20u << 16) | 7u);
  EXPECT_EQ(Addr("255.255.255.255").ToString(), "255.255.255.255");
  for (const char* bad : {"10.0.0", "10.0.0.256", "10..0.1", "a.b.c.d",
                          "10.0.0.1.2", ""}) {
    EXPECT_EQ(CodeOf([&] { Ipv4Address::Parse(bad); }),
              ErrorCode::kInvalidAddress)
        << bad;
  }
}

TEST(SubnetTest, ParsesCidr) {
  const auto s = Subnet::Parse("10.20.0.0/24");
  EXPECT_EQ(s.ToString(), "10.20.0.0/24");
  EXPECT_EQ(s.broadcast().ToString(), "10.20.0.255");
  EXPECT_TRUE(s.Contains(Addr("10.20.0.77")));
  EXPECT_FALSE(s.Contains(Addr("10.20.1.1")));
  EXPECT_EQ(CodeOf([] { Subnet::Parse("10.20.0.1/24"); }),
            ErrorCode::kInvalidAddress);
  EXPECT_EQ(CodeOf([] { Subnet::Parse("10.20.0.0"); }),
            ErrorCode::kInvalidAddress);
}

TEST(AddressPoolTest, SlashTwentyNineHasFiveUsableAddresses) {
  auto pool = AddressPool::FromStrings("192.168.1.0/29", "192.168.1.1");
  EXPECT_EQ(pool.capacity(), 5u);
  EXPECT_EQ(pool.Allocate(Key(0, FunctionType::kSmallEdge)).ToString(),
            "192.168.1.2");
  for (int i = 0; i < 4; ++i) pool.Allocate(Key(0, FunctionType::kLargeEdge));
  EXPECT_EQ(pool.free_count(), 0u);
  EXPECT_EQ(CodeOf([&] { pool.Allocate(Key(1, FunctionType::kVodEdge)); }),
            ErrorCode::kPoolExhausted);
  EXPECT_FALSE(pool.OwnerOf(Addr("192.168.1.7")).has_value());
  EXPECT_FALSE(pool.OwnerOf(Addr("192.168.1.1")).has_value());
}

TEST(AddressPoolTest, ReleasedAddressIsReusedFirst) {
  auto pool = AddressPool::FromStrings("10.20.0.0/24", "10.20.0.1");
  const auto a = pool.Allocate(Key(0, FunctionType::kSmallEdge));
  const auto b = pool.Allocate(Key(1, FunctionType::kSmallEdge));
  EXPECT_EQ(a.ToString(), "10.20.0.2");
  EXPECT_EQ(b.ToString(), "10.20.0.3");
  pool.Release(a);
  EXPECT_EQ(pool.Allocate(Key(2, FunctionType::kLiveEdge)), a);
  EXPECT_EQ(pool.OwnerOf(a), Key(2, FunctionType::kLiveEdge));
  EXPECT_EQ(CodeOf([&] { pool.Release(Addr("10.20.0.9")); }),
            ErrorCode::kNotAllocated);
  EXPECT_EQ(CodeOf([&] { pool.Release(Addr("10.20.0.1")); }),
            ErrorCode::kNotAllocated);
}

TEST(AddressPoolTest, ClaimTakesOnlyFreeAddresses) {
  auto pool = AddressPool::FromStrings("10.20.0.0/24", "10.20.0.1");
  pool.Claim(Addr("10.20.0.9"), Key(0, FunctionType::kVodEdge));
  EXPECT_FALSE(pool.IsFree(Addr("10.20.0.9")));
  EXPECT_EQ(CodeOf([&] {
              pool.Claim(Addr("10.20.0.9"), Key(1, FunctionType::kVodEdge));
            }),
            ErrorCode::kInvalidAddress);
  EXPECT_EQ(CodeOf([&] {
              pool.Claim(Addr("10.20.0.1"), Key(1, FunctionType::kVodEdge));
            }),
            ErrorCode::kInvalidAddress);
}

TEST(AddressPoolTest, PrefixAndGatewayBounds) {
  EXPECT_EQ(CodeOf([] { AddressPool::FromStrings("10.0.0.0/31", "10.0.0.1"); }),
            ErrorCode::kInvalidAddress);
  EXPECT_EQ(CodeOf([] { AddressPool::FromStrings("10.0.0.0/15", "10.0.0.1"); }),
            ErrorCode::kInvalidAddress);
  EXPECT_EQ(CodeOf([] { AddressPool::FromStrings("10.0.0.0/24", "10.0.1.1"); }),
            ErrorCode::kInvalidAddress);
  EXPECT_EQ(
      CodeOf([] { AddressPool::FromStrings("10.0.0.0/24", "10.0.0.255"); }),
      ErrorCode::kInvalidAddress);
  EXPECT_EQ(AddressPool::FromStrings("10.0.0.0/30", "10.0.0.1").capacity(), 1u);
}

// Ten thousand random allocate/release operations against a set model:
// no address is handed out twice, allocation is always the lowest free one,
// and free plus allocated always equals the capacity.
TEST(AddressPoolTest, RandomOperationsMatchSetModel) {
  auto pool = AddressPool::FromStrings("172.16.4.0/27", "172.16.4.30");
  std::set<std::uint32_t> free_model;
  for (std::uint32_t v = 1; v < 31; ++v) {
    if (v != 30) free_model.insert(Addr("172.16.4.0").value + v);
  }
  std::map<std::uint32_t, ContainerKey> held;
  std::mt19937_64 rng(29);
  for (int op = 0; op < 10000; ++op) {
    const bool allocate = held.empty() || (rng() % 2 == 0);
    if (allocate) {
      const ContainerKey key = Key(rng() % 8, EdgeTypeAt(rng() % 4));
      if (free_model.empty()) {
        EXPECT_EQ(CodeOf([&] { pool.Allocate(key); }),
                  ErrorCode::kPoolExhausted);
        continue;
      }
      const auto address = pool.Allocate(key);
      EXPECT_EQ(address.value, *free_model.begin());
      EXPECT_FALSE(held.contains(address.value));
      free_model.erase(free_model.begin());
      held.emplace(address.value, key);
    } else {
      auto it = held.begin();
      std::advance(it, static_cast<long>(rng() % held.size()));
      pool.Release(Ipv4Address{it->first});
      free_model.insert(it->first);
      held.erase(it);
    }
    ASSERT_EQ(pool.free_count(), free_model.size());
    ASSERT_EQ(pool.allocated_count(), held.size());
    ASSERT_EQ(pool.capacity(), 29u);
  }
  for (const auto& [value, key] : held) {
    EXPECT_EQ(pool.OwnerOf(Ipv4Address{value}), key);
  }
}

}  // namespace
}  // namespace cdnwae
