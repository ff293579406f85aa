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

#include <charconv>
#include <string>

#include "cdnwae/error.h"

namespace cdnwae {
namespace {

std::uint32_t HostMask(int prefix_length) {
  return prefix_length >= 32 ? 0U : (0xFFFFFFFFU >> prefix_length);
}

// Parses a decimal integer that must span all of `text`.
std::optional<unsigned> ParseNumber(std::string_view text) {
  if (text.empty() || text.size() > 3) return std::nullopt;
  unsigned value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

Ipv4Address Ipv4Address::Parse(std::string_view text) {
  std::uint32_t value = 0;
  std::string_view rest = text;
  for (int octet = 0; octet < 4; ++octet) {
    const std::size_t dot = rest.find('.');
    const bool last = octet == 3;
    if (last != (dot == std::string_view::npos)) {
      throw Error(ErrorCode::kInvalidAddress,
                  "malformed address '" + std::string(text) + "'");
    }
    const auto part = ParseNumber(last ? rest : rest.substr(0, dot));
    if (!part || *part > 255) {
      throw Error(ErrorCode::kInvalidAddress,
                  "malformed address '" + std::string(text) + "'");
    }
    value = (value << 8) | *part;
    if (!last) rest.remove_prefix(dot + 1);
  }
  return Ipv4Address{value};
}

std::string Ipv4Address::ToString() const {
  return std::to_string((value >> 24) & 0xFF) + "." +
         std::to_string((value >> 16) & 0xFF) + "." +
         std::to_string((value >> 8) & 0xFF) + "." +
         std::to_string(value & 0xFF);
}

Subnet Subnet::Parse(std::string_view cidr) {
  const std::size_t slash = cidr.find('/');
  if (slash == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidAddress,
                "subnet '" + std::string(cidr) + "' lacks a prefix length");
  }
  const auto prefix = ParseNumber(cidr.substr(slash + 1));
  if (!prefix || *prefix > 32) {
    throw Error(ErrorCode::kInvalidAddress,
                "bad prefix length in '" + std::string(cidr) + "'");
  }
  Subnet subnet{Ipv4Address::Parse(cidr.substr(0, slash)),
                static_cast<int>(*prefix)};
  if ((subnet.base.value & HostMask(subnet.prefix_length)) != 0) {
    throw Error(ErrorCode::kInvalidAddress,
                "subnet base '" + std::string(cidr) + "' has host bits set");
  }
  return subnet;
}

std::string Subnet::ToString() const {
  return base.ToString() + "/" + std::to_string(prefix_length);
}

Ipv4Address Subnet::broadcast() const {
  return Ipv4Address{base.value | HostMask(prefix_length)};
}

bool Subnet::Contains(Ipv4Address address) const {
  return (address.value & ~HostMask(prefix_length)) == base.value;
}

AddressPool::AddressPool(Subnet subnet, Ipv4Address gateway)
    : subnet_(subnet), gateway_(gateway) {
  if (subnet.prefix_length < kMinPrefixLength ||
      subnet.prefix_length > kMaxPrefixLength) {
    throw Error(ErrorCode::kInvalidAddress,
                "prefix length must be within [" +
                    std::to_string(kMinPrefixLength) + ", " +
                    std::to_string(kMaxPrefixLength) + "], got " +
                    subnet.ToString());
  }
  if ((subnet.base.value & HostMask(subnet.prefix_length)) != 0) {
    throw Error(ErrorCode::kInvalidAddress,
                "subnet base " + subnet.ToString() + " has host bits set");
  }
  if (!subnet.Contains(gateway) || gateway == subnet.network() ||
      gateway == subnet.broadcast()) {
    throw Error(ErrorCode::kInvalidAddress,
                "gateway " + gateway.ToString() + " is not a host of " +
                    subnet.ToString());
  }
  for (std::uint32_t v = subnet.network().value + 1;
       v < subnet.broadcast().value; ++v) {
    if (v != gateway.value) free_.insert(free_.end(), Ipv4Address{v});
  }
}

AddressPool AddressPool::FromStrings(std::string_view cidr,
                                     std::string_view gateway) {
  return AddressPool(Subnet::Parse(cidr), Ipv4Address::Parse(gateway));
}

Ipv4Address AddressPool::Allocate(const ContainerKey& owner) {
  if (free_.empty()) {
    throw Error(ErrorCode::kPoolExhausted,
                "no free address left in " + subnet_.ToString());
  }
  const Ipv4Address address = *free_.begin();
  free_.erase(free_.begin());
  allocated_.emplace(address, owner);
  return address;
}

void AddressPool::Claim(Ipv4Address address, const ContainerKey& owner) {
  const auto it = free_.find(address);
  if (it == free_.end()) {
    throw Error(ErrorCode::kInvalidAddress,
                address.ToString() + " is not free in " + subnet_.ToString());
  }
  free_.erase(it);
  allocated_.emplace(address, owner);
}

void AddressPool::Release(Ipv4Address address) {
  const auto it = allocated_.find(address);
  if (it == allocated_.end()) {
    throw Error(ErrorCode::kNotAllocated,
                address.ToString() + " is not allocated");
  }
  allocated_.erase(it);
  free_.insert(address);
}

std::optional<ContainerKey> AddressPool::OwnerOf(Ipv4Address address) const {
  const auto it = allocated_.find(address);
  if (it == allocated_.end()) return std::nullopt;
  return it->second;
}

}  // namespace cdnwae
