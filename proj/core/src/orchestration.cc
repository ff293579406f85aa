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

#include "cdnwae/orchestration.h"

#include <algorithm>
#include <string>

#include "cdnwae/normalization.h"

namespace cdnwae {
namespace {

void CheckLoadShape(const AssignmentMatrix& assignment,
                    std::span<const double> load, std::size_t type) {
  if (load.size() != assignment.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "load has " + std::to_string(load.size()) +
                    " machines, assignment has " +
                    std::to_string(assignment.rows()));
  }
  if (type >= assignment.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "type " + std::to_string(type) + " out of range");
  }
}

NormalizedDistribution PlacementDistribution(std::span<const double> load,
                                             const AssignmentMatrix& a) {
  const std::vector<double> per_type = LoadPerType(load, a);
  return NormalizeOrEmpty(per_type);
}

}  // namespace

std::string_view OrchestrationStatusName(OrchestrationStatus status) {
  switch (status) {
    case OrchestrationStatus::kConverged: return "converged";
    case OrchestrationStatus::kIterationCapReached:
      return "iteration_cap_reached";
    case OrchestrationStatus::kNoDemand: return "no_demand";
  }
  return "unknown";
}

std::optional<OrchestrationStatus> ParseOrchestrationStatus(
    std::string_view name) {
  for (auto status :
       {OrchestrationStatus::kConverged,
        OrchestrationStatus::kIterationCapReached,
        OrchestrationStatus::kNoDemand}) {
    if (OrchestrationStatusName(status) == name) return status;
  }
  return std::nullopt;
}

std::string_view StepActionName(StepAction action) {
  switch (action) {
    case StepAction::kGrow: return "grow";
    case StepAction::kShrink: return "shrink";
    case StepAction::kCycle: return "cycle";
  }
  return "unknown";
}

std::optional<StepAction> ParseStepAction(std::string_view name) {
  for (auto action : {StepAction::kGrow, StepAction::kShrink,
                      StepAction::kCycle}) {
    if (StepActionName(action) == name) return action;
  }
  return std::nullopt;
}

MachineId FindMinLoadedMachine(const AssignmentMatrix& assignment,
                               std::span<const double> load,
                               std::size_t type) {
  CheckLoadShape(assignment, load, type);
  std::optional<std::size_t> best;
  for (std::size_t n = 0; n < assignment.rows(); ++n) {
    if (assignment.at(n, type)) continue;
    if (!best || load[n] < load[*best]) best = n;
  }
  if (!best) {
    throw Error(ErrorCode::kNoEligibleMachine,
                "every machine already hosts type " + std::to_string(type));
  }
  return MachineId{*best};
}

MachineId FindMaxLoadedMachine(const AssignmentMatrix& assignment,
                               std::span<const double> load, std::size_t type,
                               bool protect_last) {
  CheckLoadShape(assignment, load, type);
  std::optional<std::size_t> best;
  for (std::size_t n = 0; n < assignment.rows(); ++n) {
    if (!assignment.at(n, type)) continue;
    if (!best || load[n] > load[*best]) best = n;
  }
  if (!best) {
    throw Error(ErrorCode::kNoHostingMachine,
                "no machine hosts type " + std::to_string(type));
  }
  if (protect_last && assignment.ColumnSum(type) == 1) {
    throw Error(ErrorCode::kLastContainerGuard,
                "refusing to remove the last container of demanded type " +
                    std::to_string(type));
  }
  return MachineId{*best};
}

OrchestrationOutcome Orchestrate(const ValidatedSnapshot& snapshot,
                                 const OrchestrationParams& params) {
  if (!(params.threshold > 0.0 && params.threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold must lie in (0, 1), got " +
                    std::to_string(params.threshold));
  }
  if (params.iteration_cap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "iteration_cap must be >= 1");
  }

  OrchestrationOutcome outcome;
  outcome.result = snapshot.assignment();
  const std::vector<std::uint64_t>& requests = snapshot.requests();
  if (TotalRequests(requests) == 0) {
    outcome.status = OrchestrationStatus::kNoDemand;
    return outcome;
  }

  const std::vector<double> cpu = snapshot.cpu();
  const std::vector<double> net = snapshot.net_out();
  const std::vector<double> load = CombinedLoad(cpu, net);
  const NormalizedDistribution demand = Normalize(std::span(requests));
  const double threshold = params.threshold;

  AssignmentMatrix& a = outcome.result;
  NormalizedDistribution placement = PlacementDistribution(load, a);
  std::vector<AssignmentMatrix> history{a};
  bool cycle_recorded = false;

  for (int pass = 1; pass <= params.iteration_cap; ++pass) {
    bool changed = false;
    bool blocked = false;
    for (std::size_t m = 0; m < a.cols(); ++m) {
      const bool demanded = requests[m] > 0;
      const bool uncovered = params.last_container_guard && demanded &&
                             a.ColumnSum(m) == 0;
      OrchestrationStep step;
      step.pass = pass;
      step.type = m;
      if (demand[m] - threshold > placement[m] || uncovered) {
        step.action = StepAction::kGrow;
        step.coverage = !(demand[m] - threshold > placement[m]);
        try {
          step.machine = FindMinLoadedMachine(a, load, m);
          a.Set(step.machine->index, m, true);
          changed = true;
        } catch (const Error& e) {
          step.blocked = e.code();
          blocked = true;
        }
      } else if (demand[m] + threshold < placement[m]) {
        step.action = StepAction::kShrink;
        try {
          step.machine = FindMaxLoadedMachine(
              a, load, m, params.last_container_guard && demanded);
          a.Set(step.machine->index, m, false);
          changed = true;
        } catch (const Error& e) {
          step.blocked = e.code();
          blocked = true;
        }
      } else {
        continue;
      }
      outcome.trace.push_back(step);
    }
    placement = PlacementDistribution(load, a);
    outcome.iterations = pass;

    if (!changed) {
      // A pass that changes nothing either proves the fixed point or shows
      // that every remaining step is blocked; repeating it cannot help.
      outcome.status = blocked ? OrchestrationStatus::kIterationCapReached
                               : OrchestrationStatus::kConverged;
      return outcome;
    }
    if (!cycle_recorded &&
        std::find(history.begin(), history.end(), a) != history.end()) {
      OrchestrationStep marker;
      marker.pass = pass;
      marker.action = StepAction::kCycle;
      outcome.trace.push_back(marker);
      cycle_recorded = true;
    }
    history.push_back(a);
  }
  outcome.status = OrchestrationStatus::kIterationCapReached;
  return outcome;
}

}  // namespace cdnwae
