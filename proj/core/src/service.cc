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

#include <cmath>
#include <string>
#include <utility>

namespace cdnwae {
namespace {

[[noreturn]] void ConfigFail(const std::string& field,
                             const std::string& message) {
  throw Error(ErrorCode::kConfigError, field + ": " + message);
}

AddressPool MakePool(const ServiceConfig& config) {
  try {
    return AddressPool::FromStrings(config.pool.subnet, config.pool.gateway);
  } catch (const Error& e) {
    ConfigFail("pool", e.what());
  }
}

}  // namespace

void ValidateServiceConfig(const ServiceConfig& config) {
  if (config.machine_count == 0) ConfigFail("machines.count", "must be >= 1");
  if (!(config.period_seconds > 0.0) || !std::isfinite(config.period_seconds)) {
    ConfigFail("orchestration.period_seconds", "must be positive");
  }
  if (!(config.orchestration.threshold > 0.0 &&
        config.orchestration.threshold < 1.0)) {
    ConfigFail("orchestration.threshold", "must lie in (0, 1)");
  }
  if (config.orchestration.iteration_cap < 1) {
    ConfigFail("orchestration.iteration_cap", "must be >= 1");
  }
  if (config.port < 0 || config.port > 65535) {
    ConfigFail("service.port", "must lie in [0, 65535]");
  }
  const AddressPool pool = MakePool(config);
  if (pool.capacity() < config.machine_count * kEdgeTypeCount) {
    ConfigFail("pool.subnet", "holds " + std::to_string(pool.capacity()) +
                                  " addresses, need " +
                                  std::to_string(config.machine_count *
                                                 kEdgeTypeCount));
  }
  if (config.initial_assignment &&
      (config.initial_assignment->rows() != config.machine_count ||
       config.initial_assignment->cols() != kEdgeTypeCount)) {
    ConfigFail("initial_assignment", "must be machines.count x 4");
  }
}

WaeService::WaeService(ServiceConfig config)
    : config_(std::move(config)), state_{0, {}, {}, MakePool(config_), {}} {
  ValidateServiceConfig(config_);
  const AssignmentMatrix initial =
      config_.initial_assignment ? *config_.initial_assignment
                                 : RoundRobinAssignment(config_.machine_count);
  state_.records = Bootstrap(initial, state_.pool);
  state_.commands.assign(config_.machine_count, {});
}

void WaeService::Ingest(const MachineTelemetry& telemetry,
                        const RequestVector& requests) {
  if (telemetry.machine.index >= config_.machine_count) {
    throw Error(ErrorCode::kUnknownMachine,
                "machine " + std::to_string(telemetry.machine.index) +
                    " is not part of this PoP");
  }
  for (double v : {telemetry.cpu_utilization, telemetry.net_out_utilization}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kOutOfRangeUtilization,
                  "machine " + std::to_string(telemetry.machine.index) +
                      " reported " + std::to_string(v));
    }
  }
  std::lock_guard lock(ingest_mutex_);
  reports_[telemetry.period_id][telemetry.machine.index] = {telemetry,
                                                            requests};
}

ValidatedSnapshot WaeService::AssembleSnapshot(std::int64_t period) const {
  std::vector<MachineTelemetry> telemetry;
  RequestVector requests{};
  {
    std::lock_guard lock(ingest_mutex_);
    const auto it = reports_.find(period);
    std::string missing;
    for (std::size_t n = 0; n < config_.machine_count; ++n) {
      const Report* report = nullptr;
      if (it != reports_.end()) {
        const auto found = it->second.find(n);
        if (found != it->second.end()) report = &found->second;
      }
      if (report == nullptr) {
        missing += (missing.empty() ? "" : ", ") + std::to_string(n);
        continue;
      }
      telemetry.push_back(report->telemetry);
      for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
        requests[m] += report->requests[m];
      }
    }
    if (!missing.empty()) {
      throw Error(ErrorCode::kIncompleteSnapshot,
                  "period " + std::to_string(period) +
                      " has no telemetry from machine(s) " + missing);
    }
  }
  AssignmentMatrix assignment;
  {
    std::shared_lock lock(state_mutex_);
    assignment = RunningMatrix(state_.records);
  }
  return ValidateSnapshot(telemetry, requests, assignment);
}

RoundSummary WaeService::RunRound(std::int64_t period) {
  std::lock_guard round_lock(round_mutex_);
  RoundSummary summary;
  summary.period = period;

  ValidatedSnapshot snapshot;
  try {
    snapshot = AssembleSnapshot(period);
  } catch (const Error& e) {
    summary.skipped = true;
    summary.skip_reason = e.code();
    summary.message = e.what();
    std::unique_lock lock(state_mutex_);
    summary.round = state_.round;
    last_round_ = summary;
    return summary;
  }

  // Only this thread publishes, so the state read here stays current.
  ServiceState next = State();
  OrchestrationOutcome outcome = Orchestrate(snapshot, config_.orchestration);
  const std::vector<AssignmentCommand> commands =
      Diff(next.records, outcome.result, next.pool);
  next.records = Apply(next.records, commands, next.pool);
  next.commands.assign(config_.machine_count, {});
  for (const AssignmentCommand& c : commands) {
    next.commands[c.machine.index].push_back(c);
  }
  next.round += 1;
  next.last_period = period;

  summary.round = next.round;
  summary.command_count = commands.size();
  summary.message = std::string(OrchestrationStatusName(outcome.status));
  summary.outcome = std::move(outcome);
  {
    std::unique_lock lock(state_mutex_);
    state_ = std::move(next);
    last_round_ = summary;
  }
  {
    std::lock_guard lock(ingest_mutex_);
    reports_.erase(reports_.begin(), reports_.upper_bound(period));
  }
  return summary;
}

std::optional<RoundSummary> WaeService::Tick(double now) {
  const auto period =
      static_cast<std::int64_t>(std::floor(now / config_.period_seconds)) - 1;
  if (period < 0) return std::nullopt;
  {
    std::lock_guard lock(round_mutex_);
    if (last_ticked_period_ && *last_ticked_period_ >= period) {
      return std::nullopt;
    }
    last_ticked_period_ = period;
  }
  return RunRound(period);
}

std::vector<AssignmentCommand> WaeService::FetchAssignments(
    MachineId machine) const {
  if (machine.index >= config_.machine_count) {
    throw Error(ErrorCode::kUnknownMachine,
                "machine " + std::to_string(machine.index) +
                    " is not part of this PoP");
  }
  std::shared_lock lock(state_mutex_);
  return state_.commands[machine.index];
}

ServiceState WaeService::State() const {
  std::shared_lock lock(state_mutex_);
  return state_;
}

std::optional<RoundSummary> WaeService::LastRound() const {
  std::shared_lock lock(state_mutex_);
  return last_round_;
}

std::vector<std::int64_t> WaeService::PendingPeriods() const {
  std::lock_guard lock(ingest_mutex_);
  std::vector<std::int64_t> out;
  for (const auto& [period, reports] : reports_) out.push_back(period);
  return out;
}

}  // namespace cdnwae
