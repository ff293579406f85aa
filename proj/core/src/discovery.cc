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

#include <string>

#include "cdnwae/error.h"

namespace cdnwae {
namespace {

std::string Describe(MachineId machine, FunctionType type) {
  return "machine " + std::to_string(machine.index) + " " +
         std::string(FunctionTypeName(type));
}

std::size_t RecordIndex(MachineId machine, FunctionType type) {
  return machine.index * kEdgeTypeCount + TypeIndex(type);
}

}  // namespace

std::string_view ContainerStateName(ContainerState state) {
  return state == ContainerState::kRunning ? "running" : "paused";
}

std::optional<ContainerState> ParseContainerState(std::string_view name) {
  if (name == "running") return ContainerState::kRunning;
  if (name == "paused") return ContainerState::kPaused;
  return std::nullopt;
}

std::string_view CommandActionName(CommandAction action) {
  return action == CommandAction::kStart ? "start" : "pause";
}

std::optional<CommandAction> ParseCommandAction(std::string_view name) {
  if (name == "start") return CommandAction::kStart;
  if (name == "pause") return CommandAction::kPause;
  return std::nullopt;
}

ContainerRecords PausedRecords(std::size_t machines) {
  ContainerRecords records;
  records.reserve(machines * kEdgeTypeCount);
  for (std::size_t n = 0; n < machines; ++n) {
    for (FunctionType type : kEdgeTypes) {
      records.push_back({MachineId{n}, type, ContainerState::kPaused, {}});
    }
  }
  return records;
}

std::size_t CheckRecords(const ContainerRecords& records) {
  if (records.size() % kEdgeTypeCount != 0) {
    throw Error(ErrorCode::kInvalidRecordSet,
                std::to_string(records.size()) +
                    " records do not cover whole machines");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ContainerRecord& r = records[i];
    if (r.machine.index != i / kEdgeTypeCount ||
        TypeIndex(r.type) != i % kEdgeTypeCount) {
      throw Error(ErrorCode::kInvalidRecordSet,
                  "record " + std::to_string(i) + " is " +
                      Describe(r.machine, r.type) + ", out of order");
    }
    if ((r.state == ContainerState::kRunning) != r.address.has_value()) {
      throw Error(ErrorCode::kInvalidRecordSet,
                  Describe(r.machine, r.type) +
                      " running state disagrees with its address");
    }
  }
  return records.size() / kEdgeTypeCount;
}

AssignmentMatrix RunningMatrix(const ContainerRecords& records) {
  const std::size_t machines = CheckRecords(records);
  AssignmentMatrix matrix(machines, kEdgeTypeCount);
  for (const ContainerRecord& r : records) {
    matrix.Set(r.machine.index, TypeIndex(r.type),
               r.state == ContainerState::kRunning);
  }
  return matrix;
}

std::vector<AssignmentCommand> Diff(const ContainerRecords& current,
                                    const AssignmentMatrix& desired,
                                    const AddressPool& pool) {
  const std::size_t machines = CheckRecords(current);
  if (desired.rows() != machines || desired.cols() != kEdgeTypeCount) {
    throw Error(ErrorCode::kDimensionMismatch,
                "desired matrix is " + std::to_string(desired.rows()) + "x" +
                    std::to_string(desired.cols()) + ", records describe " +
                    std::to_string(machines) + "x" +
                    std::to_string(kEdgeTypeCount));
  }

  AddressPool scratch = pool;
  std::vector<AssignmentCommand> commands;
  for (const ContainerRecord& r : current) {
    const bool want = desired.at(r.machine.index, TypeIndex(r.type));
    if (r.state == ContainerState::kRunning && !want) {
      commands.push_back({r.machine, r.type, CommandAction::kPause, {}});
      scratch.Release(*r.address);
    }
  }
  for (const ContainerRecord& r : current) {
    const bool want = desired.at(r.machine.index, TypeIndex(r.type));
    if (r.state == ContainerState::kPaused && want) {
      const Ipv4Address address = scratch.Allocate({r.machine, r.type});
      commands.push_back({r.machine, r.type, CommandAction::kStart, address});
    }
  }
  return commands;
}

ContainerRecords Apply(const ContainerRecords& current,
                       const std::vector<AssignmentCommand>& commands,
                       AddressPool& pool) {
  const std::size_t machines = CheckRecords(current);
  ContainerRecords next = current;
  AddressPool scratch = pool;
  for (const AssignmentCommand& command : commands) {
    if (command.machine.index >= machines || !IsEdgeType(command.type)) {
      throw Error(ErrorCode::kUnknownMachine,
                  "command targets " + Describe(command.machine, command.type));
    }
    ContainerRecord& r = next[RecordIndex(command.machine, command.type)];
    if (command.action == CommandAction::kStart) {
      if (r.state == ContainerState::kRunning) {
        throw Error(ErrorCode::kIllegalTransition,
                    "start on running " + Describe(r.machine, r.type));
      }
      const ContainerKey owner{r.machine, r.type};
      if (command.address) {
        scratch.Claim(*command.address, owner);
        r.address = command.address;
      } else {
        r.address = scratch.Allocate(owner);
      }
      r.state = ContainerState::kRunning;
    } else {
      if (r.state == ContainerState::kPaused) {
        throw Error(ErrorCode::kIllegalTransition,
                    "pause on paused " + Describe(r.machine, r.type));
      }
      scratch.Release(*r.address);
      r.address.reset();
      r.state = ContainerState::kPaused;
    }
  }
  pool = std::move(scratch);
  return next;
}

ContainerRecords Bootstrap(const AssignmentMatrix& initial, AddressPool& pool) {
  const ContainerRecords paused = PausedRecords(initial.rows());
  return Apply(paused, Diff(paused, initial, pool), pool);
}

}  // namespace cdnwae
