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

// JSON encodings of every file and wire format: scenario configs, snapshot
// files, orchestration outcomes, oracle results, run reports (plus their
// per-period CSV), telemetry payloads and assignment command lists. The
// schemas are documented in docs/formats.md.
//
// Parse errors name the JSON path of the offending field. Config parsing
// raises kConfigError; everything else raises kMalformedPayload.

#ifndef CDNWAE_CODEC_H_
#define CDNWAE_CODEC_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdnwae/discovery.h"
#include "cdnwae/domain.h"
#include "cdnwae/ip_pool.h"
#include "cdnwae/oracle.h"
#include "cdnwae/orchestration.h"
#include "cdnwae/service.h"
#include "cdnwae/simulator.h"

namespace cdnwae {

inline constexpr int kFormatVersion = 1;

nlohmann::json MatrixToJson(const AssignmentMatrix& matrix);
AssignmentMatrix MatrixFromJson(const nlohmann::json& json,
                                const std::string& path = "$");

// Snapshot file: machine telemetry, request counts and the current matrix,
// with an optional threshold override. Shape checks beyond JSON structure are
// left to ValidateSnapshot.
struct SnapshotFile {
  std::vector<MachineTelemetry> telemetry;
  RequestVector requests{};
  AssignmentMatrix assignment;
  std::optional<double> threshold;
};

SnapshotFile SnapshotFromJson(const nlohmann::json& json);
nlohmann::json SnapshotToJson(const SnapshotFile& snapshot);

nlohmann::json OutcomeToJson(const OrchestrationOutcome& outcome);
OrchestrationOutcome OutcomeFromJson(const nlohmann::json& json);

nlohmann::json OracleToJson(const OracleResult& result);

ScenarioConfig ConfigFromJson(const nlohmann::json& json);
nlohmann::json ConfigToJson(const ScenarioConfig& config);

nlohmann::json ReportToJson(const RunReport& report);
RunReport ReportFromJson(const nlohmann::json& json);
// One row per period; machine columns sized by the report's machine count.
std::string ReportToCsv(const RunReport& report);

// Cross-topology comparison: latency reductions against bare metal, cost
// reduction and per-machine utilization tables.
nlohmann::json ComparisonToJson(const std::vector<RunReport>& reports,
                                const ScenarioConfig& config);

// Telemetry one instance manager pushes for one period. Field names follow
// the short symbols (c, t, r) with long-form aliases.
struct TelemetryPayload {
  MachineTelemetry telemetry;
  RequestVector requests{};
};

TelemetryPayload TelemetryFromJson(const nlohmann::json& json);
nlohmann::json TelemetryToJson(const TelemetryPayload& payload);

nlohmann::json CommandToJson(const AssignmentCommand& command);
AssignmentCommand CommandFromJson(const nlohmann::json& json,
                                  const std::string& path = "$");

nlohmann::json RecordsToJson(const ContainerRecords& records);
ContainerRecords RecordsFromJson(const nlohmann::json& json);

nlohmann::json PoolToJson(const AddressPool& pool);

// Service config: machines, pool, orchestration and a "service" block with
// bind_address, port and state_file.
ServiceConfig ServiceConfigFromJson(const nlohmann::json& json);
nlohmann::json ServiceConfigToJson(const ServiceConfig& config);

nlohmann::json RoundSummaryToJson(const RoundSummary& summary);
// Round number, records, pool and per-machine commands.
nlohmann::json ServiceStateToJson(const ServiceState& state);

// Reads and parses a JSON file; kIoError names the path.
nlohmann::json ReadJsonFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& contents);

}  // namespace cdnwae

#endif  // CDNWAE_CODEC_H_
