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

// Container lifecycle bookkeeping. Every machine carries one container of
// each edge type, either running (with a public address) or paused (without
// one). Diff turns a desired assignment matrix into the start/pause commands
// the instance managers execute; Apply commits them.

#ifndef CDNWAE_DISCOVERY_H_
#define CDNWAE_DISCOVERY_H_

#include <optional>
#include <string_view>
#include <vector>

#include "cdnwae/domain.h"
#include "cdnwae/ip_pool.h"

namespace cdnwae {

enum class ContainerState { kRunning, kPaused };

std::string_view ContainerStateName(ContainerState state);
std::optional<ContainerState> ParseContainerState(std::string_view name);

struct ContainerRecord {
  MachineId machine;
  FunctionType type = FunctionType::kSmallEdge;
  ContainerState state = ContainerState::kPaused;
  std::optional<Ipv4Address> address;

  friend bool operator==(const ContainerRecord&,
                         const ContainerRecord&) = default;
};

enum class CommandAction { kStart, kPause };

std::string_view CommandActionName(CommandAction action);
std::optional<CommandAction> ParseCommandAction(std::string_view name);

struct AssignmentCommand {
  MachineId machine;
  FunctionType type = FunctionType::kSmallEdge;
  CommandAction action = CommandAction::kStart;
  // Present on Start commands only.
  std::optional<Ipv4Address> address;

  friend bool operator==(const AssignmentCommand&,
                         const AssignmentCommand&) = default;
};

// Records ordered by (machine, type), one per pair.
using ContainerRecords = std::vector<ContainerRecord>;

// All containers paused, for `machines` machines.
ContainerRecords PausedRecords(std::size_t machines);

// Throws kInvalidRecordSet unless `records` holds exactly one record per
// (machine, edge type) pair in canonical order and running <=> addressed.
// Returns the machine count.
std::size_t CheckRecords(const ContainerRecords& records);

AssignmentMatrix RunningMatrix(const ContainerRecords& records);

// One command per cell whose state disagrees with `desired`; all pauses come
// first, then starts, each group in (machine, type) order. Start addresses are
// drawn from a copy of `pool` after the pauses have released theirs, so the
// pool itself is untouched. Throws kPoolExhausted or kDimensionMismatch.
std::vector<AssignmentCommand> Diff(const ContainerRecords& current,
                                    const AssignmentMatrix& desired,
                                    const AddressPool& pool);

// Executes commands in order. Pauses release the container's address; starts
// claim the command's address (or the lowest free one when absent). Either
// everything applies or neither `current` nor `pool` changes.
// Throws kIllegalTransition (start on running, pause on paused).
ContainerRecords Apply(const ContainerRecords& current,
                       const std::vector<AssignmentCommand>& commands,
                       AddressPool& pool);

// Starts every container set in `initial`, starting from all-paused.
ContainerRecords Bootstrap(const AssignmentMatrix& initial, AddressPool& pool);

}  // namespace cdnwae

#endif  // CDNWAE_DISCOVERY_H_
