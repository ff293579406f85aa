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

#ifndef CDNWAE_IP_POOL_H_
#define CDNWAE_IP_POOL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "cdnwae/domain.h"

namespace cdnwae {

struct Ipv4Address {
  std::uint32_t value = 0;

  // Throws kInvalidAddress on anything but a dotted quad.
  static Ipv4Address Parse(std::string_view text);
  std::string ToString() const;

  friend auto operator<=>(const Ipv4Address&, const Ipv4Address&) = default;
};

struct Subnet {
  Ipv4Address base;
  int prefix_length = 0;

  // "a.b.c.d/len". Host bits of the base must be zero.
  static Subnet Parse(std::string_view cidr);
  std::string ToString() const;

  Ipv4Address network() const { return base; }
  Ipv4Address broadcast() const;
  bool Contains(Ipv4Address address) const;

  friend bool operator==(const Subnet&, const Subnet&) = default;
};

// Owner of an allocated address: one (machine, type) container.
struct ContainerKey {
  MachineId machine;
  FunctionType type = FunctionType::kSmallEdge;

  friend auto operator<=>(const ContainerKey&, const ContainerKey&) = default;
};

// Publicly routable addresses handed to running containers. The network,
// broadcast and gateway addresses are never allocatable; everything else in
// the subnet is either free or allocated. Allocation always returns the
// numerically smallest free address.
class AddressPool {
 public:
  static constexpr int kMinPrefixLength = 16;
  static constexpr int kMaxPrefixLength = 30;

  AddressPool(Subnet subnet, Ipv4Address gateway);

  static AddressPool FromStrings(std::string_view cidr,
                                 std::string_view gateway);

  // Throws kPoolExhausted when no address is free.
  Ipv4Address Allocate(const ContainerKey& owner);
  // Takes a specific free address. Throws kInvalidAddress if it is not free.
  void Claim(Ipv4Address address, const ContainerKey& owner);
  // Throws kNotAllocated if the address is not currently allocated.
  void Release(Ipv4Address address);

  bool IsFree(Ipv4Address address) const { return free_.contains(address); }
  std::optional<ContainerKey> OwnerOf(Ipv4Address address) const;

  std::size_t free_count() const { return free_.size(); }
  std::size_t allocated_count() const { return allocated_.size(); }
  // Usable addresses: subnet size minus network, broadcast and gateway.
  std::size_t capacity() const { return free_.size() + allocated_.size(); }

  const Subnet& subnet() const { return subnet_; }
  Ipv4Address gateway() const { return gateway_; }
  const std::set<Ipv4Address>& free_addresses() const { return free_; }
  const std::map<Ipv4Address, ContainerKey>& allocations() const {
    return allocated_;
  }

  friend bool operator==(const AddressPool&, const AddressPool&) = default;

 private:
  Subnet subnet_;
  Ipv4Address gateway_;
  std::set<Ipv4Address> free_;
  std::map<Ipv4Address, ContainerKey> allocated_;
};

}  // namespace cdnwae

#endif  // CDNWAE_IP_POOL_H_
