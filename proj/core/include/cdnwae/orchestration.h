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

// CDN-specialized container orchestration heuristic.
//
// Each period the heuristic compares the demand distribution R^N (request
// counts per edge type, normalized) against the placement distribution D^N
// (combined cpu + net load of every machine hosting a type, normalized). A
// type whose demand share exceeds its placement share by more than the
// threshold grows a container on the least-loaded machine that does not host
// it yet; a type whose placement share exceeds demand by more than the
// threshold loses the container on the most-loaded machine hosting it. D^N is
// recomputed after every full pass over the types, and the loop stops at the
// first pass that fires no branch.

#ifndef CDNWAE_ORCHESTRATION_H_
#define CDNWAE_ORCHESTRATION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cdnwae/domain.h"
#include "cdnwae/error.h"

namespace cdnwae {

struct OrchestrationParams {
  double threshold = 0.1;
  int iteration_cap = 64;
  // Never shrink the last container of a type that has demand, and grow one
  // for a demanded type that has none.
  bool last_container_guard = true;
};

enum class OrchestrationStatus { kConverged, kIterationCapReached, kNoDemand };

std::string_view OrchestrationStatusName(OrchestrationStatus status);
std::optional<OrchestrationStatus> ParseOrchestrationStatus(
    std::string_view name);

enum class StepAction { kGrow, kShrink, kCycle };

std::string_view StepActionName(StepAction action);
std::optional<StepAction> ParseStepAction(std::string_view name);

struct OrchestrationStep {
  int pass = 0;
  StepAction action = StepAction::kGrow;
  std::size_t type = 0;
  // Target machine; absent for blocked steps and cycle markers.
  std::optional<MachineId> machine;
  // Set when the step fired but could not be applied (kNoEligibleMachine,
  // kNoHostingMachine or kLastContainerGuard).
  std::optional<ErrorCode> blocked;
  // Grow triggered by the guard for a demanded type with no container.
  bool coverage = false;

  bool applied() const {
    return action != StepAction::kCycle && !blocked.has_value();
  }

  friend bool operator==(const OrchestrationStep&,
                         const OrchestrationStep&) = default;
};

struct OrchestrationOutcome {
  AssignmentMatrix result;
  OrchestrationStatus status = OrchestrationStatus::kConverged;
  int iterations = 0;
  std::vector<OrchestrationStep> trace;

  friend bool operator==(const OrchestrationOutcome&,
                         const OrchestrationOutcome&) = default;
};

// Throws kInvalidArgument unless 0 < threshold < 1 and iteration_cap >= 1.
OrchestrationOutcome Orchestrate(const ValidatedSnapshot& snapshot,
                                 const OrchestrationParams& params = {});

// Least-loaded machine not hosting `type`; ties go to the lowest index.
// Throws kNoEligibleMachine when every machine hosts the type.
MachineId FindMinLoadedMachine(const AssignmentMatrix& assignment,
                               std::span<const double> load, std::size_t type);

// Most-loaded machine hosting `type`; ties go to the lowest index. Throws
// kNoHostingMachine when nobody hosts it, and kLastContainerGuard when
// `protect_last` is set and exactly one machine hosts it.
MachineId FindMaxLoadedMachine(const AssignmentMatrix& assignment,
                               std::span<const double> load, std::size_t type,
                               bool protect_last);

}  // namespace cdnwae

#endif  // CDNWAE_ORCHESTRATION_H_
