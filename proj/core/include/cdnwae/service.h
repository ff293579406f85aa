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

// In-memory engine behind the wire-facing service. Instance managers push
// per-period telemetry; a round assembles the period snapshot, orchestrates,
// diffs against the live container records and publishes one command list
// per machine. Transport lives in tools/.
//
// Ingestion may run concurrently with everything else. Rounds are serialized
// among themselves, and publishing swaps the whole round at once, so readers
// never observe a mix of two rounds.

#ifndef CDNWAE_SERVICE_H_
#define CDNWAE_SERVICE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cdnwae/discovery.h"
#include "cdnwae/domain.h"
#include "cdnwae/error.h"
#include "cdnwae/ip_pool.h"
#include "cdnwae/orchestration.h"
#include "cdnwae/simulator.h"

namespace cdnwae {

struct ServiceConfig {
  std::size_t machine_count = 3;
  PoolConfig pool;
  OrchestrationParams orchestration;
  double period_seconds = 600.0;
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  // Written on graceful shutdown; empty disables the snapshot.
  std::string state_file = "wae_state.json";
  // Cold-start placement; round-robin when absent.
  std::optional<AssignmentMatrix> initial_assignment;
};

// Throws kConfigError naming the offending field.
void ValidateServiceConfig(const ServiceConfig& config);

struct RoundSummary {
  // Sequence number of published rounds; skipped rounds keep the previous one.
  std::uint64_t round = 0;
  std::int64_t period = 0;
  bool skipped = false;
  // Why the round was skipped, e.g. kIncompleteSnapshot.
  std::optional<ErrorCode> skip_reason;
  std::string message;
  std::optional<OrchestrationOutcome> outcome;
  std::size_t command_count = 0;
};

struct ServiceState {
  std::uint64_t round = 0;
  std::optional<std::int64_t> last_period;
  ContainerRecords records;
  AddressPool pool;
  // Commands of the latest published round, indexed by machine.
  std::vector<std::vector<AssignmentCommand>> commands;
};

class WaeService {
 public:
  explicit WaeService(ServiceConfig config);

  const ServiceConfig& config() const { return config_; }
  std::size_t machine_count() const { return config_.machine_count; }

  // Stores the payload under (period, machine); a later payload for the same
  // key replaces it. Throws kUnknownMachine or kOutOfRangeUtilization.
  void Ingest(const MachineTelemetry& telemetry, const RequestVector& requests);

  // Point-in-time snapshot of `period` against the live assignment. Throws
  // kIncompleteSnapshot naming the machines that have not reported.
  ValidatedSnapshot AssembleSnapshot(std::int64_t period) const;

  // Validate, orchestrate, diff and publish for `period`. An incomplete
  // snapshot skips the round and leaves every piece of state untouched.
  RoundSummary RunRound(std::int64_t period);

  // Runs the round for the last period that closed at or before `now`
  // seconds, unless that period already had one.
  std::optional<RoundSummary> Tick(double now);

  // Throws kUnknownMachine.
  std::vector<AssignmentCommand> FetchAssignments(MachineId machine) const;

  ServiceState State() const;
  std::optional<RoundSummary> LastRound() const;
  // Periods with at least one stored payload, ascending.
  std::vector<std::int64_t> PendingPeriods() const;

 private:
  struct Report {
    MachineTelemetry telemetry;
    RequestVector requests{};
  };

  ServiceConfig config_;

  mutable std::mutex ingest_mutex_;
  std::map<std::int64_t, std::map<std::size_t, Report>> reports_;

  std::mutex round_mutex_;
  std::optional<std::int64_t> last_ticked_period_;

  mutable std::shared_mutex state_mutex_;
  ServiceState state_;
  std::optional<RoundSummary> last_round_;
};

}  // namespace cdnwae

#endif  // CDNWAE_SERVICE_H_
