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

#include "cdnwae/codec.h"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "cdnwae/error.h"

namespace cdnwae {
namespace {

using nlohmann::json;

// Typed access to a JSON value that reports failures with the JSON path.
class Reader {
 public:
  Reader(const json& value, std::string path, ErrorCode code)
      : value_(&value), path_(std::move(path)), code_(code) {}

  [[noreturn]] void Fail(const std::string& message) const {
    throw Error(code_, path_ + ": " + message);
  }

  const json& raw() const { return *value_; }
  const std::string& path() const { return path_; }

  std::optional<Reader> Maybe(std::initializer_list<std::string_view> keys)
      const {
    if (!value_->is_object()) Fail("expected an object");
    for (std::string_view key : keys) {
      const auto it = value_->find(key);
      if (it != value_->end() && !it->is_null()) {
        return Reader(*it, path_ + "." + std::string(key), code_);
      }
    }
    return std::nullopt;
  }

  Reader At(std::initializer_list<std::string_view> keys) const {
    if (auto found = Maybe(keys)) return *found;
    Fail("missing field '" + std::string(*keys.begin()) + "'");
  }
  Reader At(std::string_view key) const { return At({key}); }

  std::size_t size() const {
    if (!value_->is_array()) Fail("expected an array");
    return value_->size();
  }
  Reader Index(std::size_t i) const {
    return Reader((*value_)[i], path_ + "[" + std::to_string(i) + "]", code_);
  }

  double Number() const {
    if (!value_->is_number()) Fail("expected a number");
    return value_->get<double>();
  }
  std::uint64_t Count() const {
    if (value_->is_number_unsigned()) return value_->get<std::uint64_t>();
    if (value_->is_number_integer() && value_->get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(value_->get<std::int64_t>());
    }
    Fail("expected a nonnegative integer");
  }
  std::int64_t Integer() const {
    if (!value_->is_number_integer()) Fail("expected an integer");
    return value_->get<std::int64_t>();
  }
  std::string String() const {
    if (!value_->is_string()) Fail("expected a string");
    return value_->get<std::string>();
  }
  bool Bool() const {
    if (!value_->is_boolean()) Fail("expected a boolean");
    return value_->get<bool>();
  }

  FunctionType EdgeType() const {
    const auto type = ParseFunctionType(String());
    if (!type || !IsEdgeType(*type)) Fail("unknown edge type");
    return *type;
  }

  void CheckVersion() const {
    if (auto version = Maybe({"version"})) {
      if (version->Integer() != kFormatVersion) {
        version->Fail("unsupported version " +
                      std::to_string(version->Integer()));
      }
    }
  }

 private:
  const json* value_;
  std::string path_;
  ErrorCode code_;
};

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

RequestVector ReadRequests(const Reader& reader) {
  if (reader.size() != kEdgeTypeCount) {
    throw Error(ErrorCode::kDimensionMismatch,
                reader.path() + ": expected " +
                    std::to_string(kEdgeTypeCount) + " request counts, got " +
                    std::to_string(reader.size()));
  }
  RequestVector out{};
  for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
    out[m] = reader.Index(m).Count();
  }
  return out;
}

json RequestsToJson(const RequestVector& requests) {
  return json(std::vector<std::uint64_t>(requests.begin(), requests.end()));
}

json TypeLatencyToJson(const TypeLatency& latency) {
  return {{"count", latency.count},
          {"mean", latency.mean},
          {"p95", latency.p95}};
}

TypeLatency TypeLatencyFromReader(const Reader& reader) {
  return {reader.At("count").Count(), reader.At("mean").Number(),
          reader.At("p95").Number()};
}

json LatencyTableToJson(const std::array<TypeLatency, kEdgeTypeCount>& table) {
  json out = json::object();
  for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
    out[std::string(FunctionTypeName(EdgeTypeAt(m)))] =
        TypeLatencyToJson(table[m]);
  }
  return out;
}

std::array<TypeLatency, kEdgeTypeCount> LatencyTableFromReader(
    const Reader& reader) {
  std::array<TypeLatency, kEdgeTypeCount> table{};
  for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
    table[m] = TypeLatencyFromReader(
        reader.At(FunctionTypeName(EdgeTypeAt(m))));
  }
  return table;
}

std::optional<ErrorCode> ParseBlockedCode(std::string_view name) {
  for (ErrorCode code :
       {ErrorCode::kNoEligibleMachine, ErrorCode::kNoHostingMachine,
        ErrorCode::kLastContainerGuard}) {
    if (ErrorCodeName(code) == name) return code;
  }
  return std::nullopt;
}

json MachineSpecToJson(const MachineSpec& spec) {
  return {{"cpu_capacity", spec.cpu_capacity},
          {"link_capacity", spec.link_capacity}};
}

void ReadMachineSpec(const Reader& reader, MachineSpec& spec) {
  if (auto v = reader.Maybe({"cpu_capacity"})) spec.cpu_capacity = v->Number();
  if (auto v = reader.Maybe({"link_capacity"})) {
    spec.link_capacity = v->Number();
  }
}

}  // namespace

json MatrixToJson(const AssignmentMatrix& matrix) {
  return json(matrix.ToRows());
}

AssignmentMatrix MatrixFromJson(const json& value, const std::string& path) {
  const Reader reader(value, path, ErrorCode::kMalformedPayload);
  std::vector<std::vector<int>> rows(reader.size());
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const Reader row = reader.Index(n);
    rows[n].resize(row.size());
    for (std::size_t m = 0; m < rows[n].size(); ++m) {
      rows[n][m] = static_cast<int>(row.Index(m).Integer());
    }
  }
  return AssignmentMatrix::FromRows(rows);
}

SnapshotFile SnapshotFromJson(const json& value) {
  const Reader reader(value, "$", ErrorCode::kMalformedPayload);
  reader.CheckVersion();
  SnapshotFile out;
  const Reader machines = reader.At({"machines", "telemetry"});
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const Reader entry = machines.Index(i);
    MachineTelemetry t;
    t.machine.index = entry.At({"machine", "machine_id"}).Count();
    t.cpu_utilization = entry.At({"c", "cpu_utilization"}).Number();
    t.net_out_utilization = entry.At({"t", "net_out_utilization"}).Number();
    if (auto period = entry.Maybe({"period", "period_id"})) {
      t.period_id = period->Integer();
    }
    out.telemetry.push_back(t);
  }
  out.requests = ReadRequests(reader.At({"r", "requests"}));
  const Reader matrix = reader.At({"A", "assignment"});
  out.assignment = MatrixFromJson(matrix.raw(), matrix.path());
  if (auto threshold = reader.Maybe({"threshold"})) {
    out.threshold = threshold->Number();
  }
  return out;
}

json SnapshotToJson(const SnapshotFile& snapshot) {
  json machines = json::array();
  for (const MachineTelemetry& t : snapshot.telemetry) {
    machines.push_back({{"machine", t.machine.index},
                        {"c", t.cpu_utilization},
                        {"t", t.net_out_utilization},
                        {"period", t.period_id}});
  }
  json out = {{"version", kFormatVersion},
              {"machines", machines},
              {"requests", RequestsToJson(snapshot.requests)},
              {"assignment", MatrixToJson(snapshot.assignment)}};
  if (snapshot.threshold) out["threshold"] = *snapshot.threshold;
  return out;
}

json OutcomeToJson(const OrchestrationOutcome& outcome) {
  json trace = json::array();
  for (const OrchestrationStep& step : outcome.trace) {
    json entry = {{"pass", step.pass},
                  {"action", StepActionName(step.action)},
                  {"type_index", step.type}};
    if (step.type < kEdgeTypeCount) {
      entry["type"] = FunctionTypeName(EdgeTypeAt(step.type));
    }
    if (step.machine) entry["machine"] = step.machine->index;
    if (step.blocked) entry["blocked"] = ErrorCodeName(*step.blocked);
    if (step.coverage) entry["coverage"] = true;
    trace.push_back(std::move(entry));
  }
  return {{"version", kFormatVersion},
          {"status", OrchestrationStatusName(outcome.status)},
          {"iterations", outcome.iterations},
          {"container_count", outcome.result.Count()},
          {"result", MatrixToJson(outcome.result)},
          {"trace", trace}};
}

OrchestrationOutcome OutcomeFromJson(const json& value) {
  const Reader reader(value, "$", ErrorCode::kMalformedPayload);
  reader.CheckVersion();
  OrchestrationOutcome out;
  const Reader status = reader.At("status");
  const auto parsed = ParseOrchestrationStatus(status.String());
  if (!parsed) status.Fail("unknown status");
  out.status = *parsed;
  out.iterations = static_cast<int>(reader.At("iterations").Integer());
  const Reader result = reader.At("result");
  out.result = MatrixFromJson(result.raw(), result.path());
  const Reader trace = reader.At("trace");
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Reader entry = trace.Index(i);
    OrchestrationStep step;
    step.pass = static_cast<int>(entry.At("pass").Integer());
    const Reader action = entry.At("action");
    const auto parsed_action = ParseStepAction(action.String());
    if (!parsed_action) action.Fail("unknown action");
    step.action = *parsed_action;
    step.type = entry.At("type_index").Count();
    if (auto machine = entry.Maybe({"machine"})) {
      step.machine = MachineId{machine->Count()};
    }
    if (auto blocked = entry.Maybe({"blocked"})) {
      const auto code = ParseBlockedCode(blocked->String());
      if (!code) blocked->Fail("unknown blocking reason");
      step.blocked = code;
    }
    if (auto coverage = entry.Maybe({"coverage"})) {
      step.coverage = coverage->Bool();
    }
    out.trace.push_back(step);
  }
  return out;
}

json OracleToJson(const OracleResult& result) {
  return {{"version", kFormatVersion},
          {"feasible", result.feasible},
          {"optimal", result.feasible ? MatrixToJson(result.optimal)
                                      : json(nullptr)},
          {"optimal_count", result.optimal_count},
          {"feasible_count", result.feasible_count},
          {"enumerated", result.enumerated}};
}

ScenarioConfig ConfigFromJson(const json& value) {
  const Reader reader(value, "$", ErrorCode::kConfigError);
  reader.CheckVersion();
  ScenarioConfig config;
  if (auto v = reader.Maybe({"name"})) config.name = v->String();
  if (auto v = reader.Maybe({"seed"})) config.seed = v->Count();
  if (auto v = reader.Maybe({"duration"})) config.duration = v->Number();
  if (auto machines = reader.Maybe({"machines"})) {
    if (auto v = machines->Maybe({"count"})) config.machine_count = v->Count();
    ReadMachineSpec(*machines, config.machine);
  }
  config.bare_metal_machine = config.machine;
  if (auto bare = reader.Maybe({"bare_metal_machine"})) {
    ReadMachineSpec(*bare, config.bare_metal_machine);
  }
  if (auto pool = reader.Maybe({"pool"})) {
    if (auto v = pool->Maybe({"subnet"})) config.pool.subnet = v->String();
    if (auto v = pool->Maybe({"gateway"})) config.pool.gateway = v->String();
  }
  if (auto workload = reader.Maybe({"workload", "phases"})) {
    for (std::size_t i = 0; i < workload->size(); ++i) {
      const Reader entry = workload->Index(i);
      WorkloadPhase phase;
      phase.type = entry.At("type").EdgeType();
      phase.total_users = entry.At("total_users").Count();
      if (auto v = entry.Maybe({"ramp_up"})) phase.ramp_up = v->Number();
      phase.requests_per_user_per_second =
          entry.At("requests_per_user_per_second").Number();
      phase.mean_response_size = entry.At("mean_response_size").Number();
      phase.duration = entry.At("duration").Number();
      if (auto v = entry.Maybe({"start"})) phase.start = v->Number();
      config.phases.push_back(phase);
    }
  }
  if (auto latency = reader.Maybe({"latency"})) {
    if (auto demand = latency->Maybe({"service_demand"})) {
      for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
        if (auto v = demand->Maybe({FunctionTypeName(EdgeTypeAt(m))})) {
          config.latency.service_demand[m] = v->Number();
        }
      }
    }
    if (auto v = latency->Maybe({"queue_capacity"})) {
      config.latency.queue_capacity = v->Count();
    }
    if (auto v = latency->Maybe({"service_time"})) {
      const auto model = ParseServiceTimeModel(v->String());
      if (!model) v->Fail("expected 'exponential' or 'deterministic'");
      config.latency.service_time = *model;
    }
  }
  if (auto orchestration = reader.Maybe({"orchestration"})) {
    if (auto v = orchestration->Maybe({"threshold"})) {
      config.orchestration.threshold = v->Number();
    }
    if (auto v = orchestration->Maybe({"iteration_cap"})) {
      config.orchestration.iteration_cap = static_cast<int>(v->Integer());
    }
    if (auto v = orchestration->Maybe({"last_container_guard"})) {
      config.orchestration.last_container_guard = v->Bool();
    }
    if (auto v = orchestration->Maybe({"period_seconds"})) {
      config.period_seconds = v->Number();
    }
    if (auto v = orchestration->Maybe({"reference_period_seconds"})) {
      config.reference_period_seconds = v->Number();
    }
  }
  if (auto cost = reader.Maybe({"cost"})) {
    if (auto v = cost->Maybe({"machine_unit_cost"})) {
      config.cost.machine_unit_cost = v->Number();
    }
    if (auto v = cost->Maybe({"traditional_machines"})) {
      config.cost.traditional_machines = v->Count();
    }
  }
  if (auto topologies = reader.Maybe({"topologies"})) {
    config.topologies.clear();
    for (std::size_t i = 0; i < topologies->size(); ++i) {
      const Reader entry = topologies->Index(i);
      const auto topology = ParseTopology(entry.String());
      if (!topology) entry.Fail("unknown topology");
      config.topologies.push_back(*topology);
    }
  }
  ValidateConfig(config);
  return config;
}

json ConfigToJson(const ScenarioConfig& config) {
  json workload = json::array();
  for (const WorkloadPhase& p : config.phases) {
    workload.push_back(
        {{"type", FunctionTypeName(p.type)},
         {"total_users", p.total_users},
         {"ramp_up", p.ramp_up},
         {"requests_per_user_per_second", p.requests_per_user_per_second},
         {"mean_response_size", p.mean_response_size},
         {"duration", p.duration},
         {"start", p.start}});
  }
  json demand = json::object();
  for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
    demand[std::string(FunctionTypeName(EdgeTypeAt(m)))] =
        config.latency.service_demand[m];
  }
  json topologies = json::array();
  for (Topology t : config.topologies) topologies.push_back(TopologyName(t));
  json machines = MachineSpecToJson(config.machine);
  machines["count"] = config.machine_count;
  return {
      {"version", kFormatVersion},
      {"name", config.name},
      {"seed", config.seed},
      {"duration", config.duration},
      {"machines", machines},
      {"bare_metal_machine", MachineSpecToJson(config.bare_metal_machine)},
      {"pool", {{"subnet", config.pool.subnet},
                {"gateway", config.pool.gateway}}},
      {"workload", workload},
      {"latency",
       {{"service_demand", demand},
        {"queue_capacity", config.latency.queue_capacity},
        {"service_time",
         ServiceTimeModelName(config.latency.service_time)}}},
      {"orchestration",
       {{"threshold", config.orchestration.threshold},
        {"iteration_cap", config.orchestration.iteration_cap},
        {"last_container_guard", config.orchestration.last_container_guard},
        {"period_seconds", config.period_seconds},
        {"reference_period_seconds", config.reference_period_seconds}}},
      {"cost",
       {{"machine_unit_cost", config.cost.machine_unit_cost},
        {"traditional_machines", config.cost.traditional_machines}}},
      {"topologies", topologies}};
}

json ReportToJson(const RunReport& report) {
  json machines = json::array();
  for (const MachineSummary& m : report.machines) {
    machines.push_back(
        {{"machine", m.machine},
         {"roles", m.roles},
         {"mean_cpu_utilization", m.mean_cpu_utilization},
         {"mean_net_out_utilization", m.mean_net_out_utilization}});
  }
  json periods = json::array();
  for (const PeriodRecord& p : report.periods) {
    json telemetry = json::array();
    for (const MachineTelemetry& t : p.machines) {
      telemetry.push_back({{"machine", t.machine.index},
                           {"c", t.cpu_utilization},
                           {"t", t.net_out_utilization}});
    }
    periods.push_back(
        {{"period", p.period},
         {"start", p.start},
         {"end", p.end},
         {"containers", p.containers},
         {"served", p.served},
         {"dropped", p.dropped},
         {"orchestration",
          p.orchestration ? json(OrchestrationStatusName(*p.orchestration))
                          : json(nullptr)},
         {"commands", p.commands},
         {"requests", RequestsToJson(p.requests)},
         {"latency", LatencyTableToJson(p.latency)},
         {"machines", telemetry}});
  }
  return {{"version", kFormatVersion},
          {"scenario", report.scenario},
          {"topology", TopologyName(report.topology)},
          {"seed", report.seed},
          {"period_seconds", report.period_seconds},
          {"simulated_seconds", report.simulated_seconds},
          {"reference_equivalent_seconds", report.reference_equivalent_seconds},
          {"requests",
           {{"generated", report.generated},
            {"served", report.served},
            {"dropped", report.dropped},
            {"in_flight", report.in_flight}}},
          {"mean_latency", report.mean_latency},
          {"latency_by_type", LatencyTableToJson(report.latency_by_type)},
          {"machine_count", report.machine_count},
          {"cost", report.cost},
          {"machines", machines},
          {"periods", periods}};
}

RunReport ReportFromJson(const json& value) {
  const Reader reader(value, "$", ErrorCode::kMalformedPayload);
  reader.CheckVersion();
  RunReport report;
  report.scenario = reader.At("scenario").String();
  const Reader topology = reader.At("topology");
  const auto parsed = ParseTopology(topology.String());
  if (!parsed) topology.Fail("unknown topology");
  report.topology = *parsed;
  report.seed = reader.At("seed").Count();
  report.period_seconds = reader.At("period_seconds").Number();
  report.simulated_seconds = reader.At("simulated_seconds").Number();
  report.reference_equivalent_seconds =
      reader.At("reference_equivalent_seconds").Number();
  const Reader requests = reader.At("requests");
  report.generated = requests.At("generated").Count();
  report.served = requests.At("served").Count();
  report.dropped = requests.At("dropped").Count();
  report.in_flight = requests.At("in_flight").Count();
  report.mean_latency = reader.At("mean_latency").Number();
  report.latency_by_type = LatencyTableFromReader(reader.At("latency_by_type"));
  report.machine_count = reader.At("machine_count").Count();
  report.cost = reader.At("cost").Number();
  const Reader machines = reader.At("machines");
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const Reader m = machines.Index(i);
    report.machines.push_back({m.At("machine").Count(), m.At("roles").String(),
                               m.At("mean_cpu_utilization").Number(),
                               m.At("mean_net_out_utilization").Number()});
  }
  const Reader periods = reader.At("periods");
  for (std::size_t i = 0; i < periods.size(); ++i) {
    const Reader p = periods.Index(i);
    PeriodRecord record;
    record.period = p.At("period").Integer();
    record.start = p.At("start").Number();
    record.end = p.At("end").Number();
    record.containers = p.At("containers").Count();
    record.served = p.At("served").Count();
    record.dropped = p.At("dropped").Count();
    if (auto status = p.Maybe({"orchestration"})) {
      record.orchestration = ParseOrchestrationStatus(status->String());
      if (!record.orchestration) status->Fail("unknown status");
    }
    record.commands = p.At("commands").Count();
    record.requests = ReadRequests(p.At("requests"));
    record.latency = LatencyTableFromReader(p.At("latency"));
    const Reader telemetry = p.At("machines");
    for (std::size_t n = 0; n < telemetry.size(); ++n) {
      const Reader t = telemetry.Index(n);
      record.machines.push_back({MachineId{t.At("machine").Count()},
                                 t.At("c").Number(), t.At("t").Number(),
                                 record.period});
    }
    report.periods.push_back(std::move(record));
  }
  return report;
}

std::string ReportToCsv(const RunReport& report) {
  std::ostringstream out;
  out << "period,start,end,containers,served,dropped,orchestration,commands";
  for (FunctionType type : kEdgeTypes) {
    const std::string name(FunctionTypeName(type));
    out << ",requests_" << name << ",latency_mean_" << name
        << ",latency_p95_" << name;
  }
  for (std::size_t n = 0; n < report.machine_count; ++n) {
    out << ",cpu_" << n << ",net_" << n;
  }
  out << "\n";
  for (const PeriodRecord& p : report.periods) {
    out << p.period << "," << FormatDouble(p.start) << ","
        << FormatDouble(p.end) << "," << p.containers << "," << p.served
        << "," << p.dropped << ","
        << (p.orchestration ? OrchestrationStatusName(*p.orchestration) : "")
        << "," << p.commands;
    for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
      out << "," << p.requests[m] << "," << FormatDouble(p.latency[m].mean)
          << "," << FormatDouble(p.latency[m].p95);
    }
    for (std::size_t n = 0; n < report.machine_count; ++n) {
      const bool present = n < p.machines.size();
      out << "," << (present ? FormatDouble(p.machines[n].cpu_utilization) : "")
          << ","
          << (present ? FormatDouble(p.machines[n].net_out_utilization) : "");
    }
    out << "\n";
  }
  return out.str();
}

json ComparisonToJson(const std::vector<RunReport>& reports,
                      const ScenarioConfig& config) {
  const RunReport* bare = nullptr;
  for (const RunReport& r : reports) {
    if (r.topology == Topology::kBareMetal) bare = &r;
  }
  json topologies = json::array();
  for (const RunReport& r : reports) {
    json machines = json::array();
    for (const MachineSummary& m : r.machines) {
      machines.push_back(
          {{"machine", m.machine},
           {"roles", m.roles},
           {"cpu_percent", 100.0 * m.mean_cpu_utilization},
           {"net_out_percent", 100.0 * m.mean_net_out_utilization}});
    }
    json entry = {{"topology", TopologyName(r.topology)},
                  {"mean_latency", r.mean_latency},
                  {"served", r.served},
                  {"dropped", r.dropped},
                  {"cost", r.cost},
                  {"utilization", machines}};
    if (bare != nullptr && bare->mean_latency > 0.0) {
      entry["latency_reduction_vs_bare_metal_percent"] =
          100.0 * (1.0 - r.mean_latency / bare->mean_latency);
    }
    topologies.push_back(std::move(entry));
  }
  std::vector<const RunReport*> order;
  for (const RunReport& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const RunReport* a, const RunReport* b) {
                     return a->mean_latency < b->mean_latency;
                   });
  json ordering = json::array();
  for (const RunReport* r : order) ordering.push_back(TopologyName(r->topology));
  return {{"version", kFormatVersion},
          {"scenario", config.name},
          {"seed", config.seed},
          {"cost_reduction_percent", 100.0 * CostReduction(config)},
          {"latency_ordering", ordering},
          {"topologies", topologies}};
}

TelemetryPayload TelemetryFromJson(const json& value) {
  const Reader reader(value, "$", ErrorCode::kMalformedPayload);
  reader.CheckVersion();
  TelemetryPayload payload;
  MachineTelemetry& t = payload.telemetry;
  t.machine.index = reader.At({"machine", "machine_id"}).Count();
  t.period_id = reader.At({"period", "period_id"}).Integer();
  const Reader cpu = reader.At({"c", "cpu_utilization"});
  const Reader net = reader.At({"t", "net_out_utilization"});
  t.cpu_utilization = cpu.Number();
  t.net_out_utilization = net.Number();
  for (const Reader* field : {&cpu, &net}) {
    const double v = field->Number();
    if (!(v >= 0.0 && v <= 1.0)) field->Fail("must lie in [0, 1]");
  }
  const Reader requests = reader.At({"r", "requests"});
  if (requests.size() != kEdgeTypeCount) {
    requests.Fail("expected " + std::to_string(kEdgeTypeCount) + " counts");
  }
  for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
    payload.requests[m] = requests.Index(m).Count();
  }
  return payload;
}

json TelemetryToJson(const TelemetryPayload& payload) {
  return {{"version", kFormatVersion},
          {"machine", payload.telemetry.machine.index},
          {"period", payload.telemetry.period_id},
          {"c", payload.telemetry.cpu_utilization},
          {"t", payload.telemetry.net_out_utilization},
          {"r", RequestsToJson(payload.requests)}};
}

json CommandToJson(const AssignmentCommand& command) {
  json out = {{"machine", command.machine.index},
              {"type", FunctionTypeName(command.type)},
              {"action", CommandActionName(command.action)}};
  if (command.address) out["address"] = command.address->ToString();
  return out;
}

AssignmentCommand CommandFromJson(const json& value, const std::string& path) {
  const Reader reader(value, path, ErrorCode::kMalformedPayload);
  AssignmentCommand command;
  command.machine.index = reader.At("machine").Count();
  command.type = reader.At("type").EdgeType();
  const Reader action = reader.At("action");
  const auto parsed = ParseCommandAction(action.String());
  if (!parsed) action.Fail("unknown action");
  command.action = *parsed;
  if (auto address = reader.Maybe({"address"})) {
    command.address = Ipv4Address::Parse(address->String());
  }
  return command;
}

json RecordsToJson(const ContainerRecords& records) {
  json out = json::array();
  for (const ContainerRecord& r : records) {
    json entry = {{"machine", r.machine.index},
                  {"type", FunctionTypeName(r.type)},
                  {"state", ContainerStateName(r.state)}};
    if (r.address) entry["address"] = r.address->ToString();
    out.push_back(std::move(entry));
  }
  return out;
}

ContainerRecords RecordsFromJson(const json& value) {
  const Reader reader(value, "$", ErrorCode::kMalformedPayload);
  ContainerRecords records;
  for (std::size_t i = 0; i < reader.size(); ++i) {
    const Reader entry = reader.Index(i);
    ContainerRecord r;
    r.machine.index = entry.At("machine").Count();
    r.type = entry.At("type").EdgeType();
    const Reader state = entry.At("state");
    const auto parsed = ParseContainerState(state.String());
    if (!parsed) state.Fail("unknown state");
    r.state = *parsed;
    if (auto address = entry.Maybe({"address"})) {
      r.address = Ipv4Address::Parse(address->String());
    }
    records.push_back(r);
  }
  CheckRecords(records);
  return records;
}

json PoolToJson(const AddressPool& pool) {
  json allocated = json::array();
  for (const auto& [address, owner] : pool.allocations()) {
    allocated.push_back({{"address", address.ToString()},
                         {"machine", owner.machine.index},
                         {"type", FunctionTypeName(owner.type)}});
  }
  return {{"subnet", pool.subnet().ToString()},
          {"gateway", pool.gateway().ToString()},
          {"free_count", pool.free_count()},
          {"allocated", allocated}};
}

ServiceConfig ServiceConfigFromJson(const json& value) {
  const Reader reader(value, "$", ErrorCode::kConfigError);
  reader.CheckVersion();
  ServiceConfig config;
  if (auto machines = reader.Maybe({"machines"})) {
    if (auto v = machines->Maybe({"count"})) config.machine_count = v->Count();
  }
  if (auto pool = reader.Maybe({"pool"})) {
    if (auto v = pool->Maybe({"subnet"})) config.pool.subnet = v->String();
    if (auto v = pool->Maybe({"gateway"})) config.pool.gateway = v->String();
  }
  if (auto orchestration = reader.Maybe({"orchestration"})) {
    if (auto v = orchestration->Maybe({"threshold"})) {
      config.orchestration.threshold = v->Number();
    }
    if (auto v = orchestration->Maybe({"iteration_cap"})) {
      config.orchestration.iteration_cap = static_cast<int>(v->Integer());
    }
    if (auto v = orchestration->Maybe({"last_container_guard"})) {
      config.orchestration.last_container_guard = v->Bool();
    }
    if (auto v = orchestration->Maybe({"period_seconds"})) {
      config.period_seconds = v->Number();
    }
  }
  if (auto service = reader.Maybe({"service"})) {
    if (auto v = service->Maybe({"bind_address"})) {
      config.bind_address = v->String();
    }
    if (auto v = service->Maybe({"port"})) {
      config.port = static_cast<int>(v->Integer());
    }
    if (auto v = service->Maybe({"state_file"})) config.state_file = v->String();
  }
  if (auto initial = reader.Maybe({"initial_assignment"})) {
    try {
      config.initial_assignment = MatrixFromJson(initial->raw(), initial->path());
    } catch (const Error& e) {
      initial->Fail(e.what());
    }
  }
  ValidateServiceConfig(config);
  return config;
}

json ServiceConfigToJson(const ServiceConfig& config) {
  json out = {
      {"version", kFormatVersion},
      {"machines", {{"count", config.machine_count}}},
      {"pool", {{"subnet", config.pool.subnet},
                {"gateway", config.pool.gateway}}},
      {"orchestration",
       {{"threshold", config.orchestration.threshold},
        {"iteration_cap", config.orchestration.iteration_cap},
        {"last_container_guard", config.orchestration.last_container_guard},
        {"period_seconds", config.period_seconds}}},
      {"service",
       {{"bind_address", config.bind_address},
        {"port", config.port},
        {"state_file", config.state_file}}}};
  if (config.initial_assignment) {
    out["initial_assignment"] = MatrixToJson(*config.initial_assignment);
  }
  return out;
}

json RoundSummaryToJson(const RoundSummary& summary) {
  json out = {{"round", summary.round},
              {"period", summary.period},
              {"skipped", summary.skipped},
              {"message", summary.message},
              {"command_count", summary.command_count}};
  if (summary.skip_reason) {
    out["skip_reason"] = ErrorCodeName(*summary.skip_reason);
  }
  if (summary.outcome) {
    out["status"] = OrchestrationStatusName(summary.outcome->status);
    out["iterations"] = summary.outcome->iterations;
    out["result"] = MatrixToJson(summary.outcome->result);
  }
  return out;
}

json ServiceStateToJson(const ServiceState& state) {
  json commands = json::array();
  for (std::size_t n = 0; n < state.commands.size(); ++n) {
    json list = json::array();
    for (const AssignmentCommand& c : state.commands[n]) {
      list.push_back(CommandToJson(c));
    }
    commands.push_back({{"machine", n}, {"commands", list}});
  }
  return {{"version", kFormatVersion},
          {"round", state.round},
          {"last_period",
           state.last_period ? json(*state.last_period) : json(nullptr)},
          {"assignment", MatrixToJson(RunningMatrix(state.records))},
          {"records", RecordsToJson(state.records)},
          {"pool", PoolToJson(state.pool)},
          {"commands", commands}};
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedPayload, path + ": " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

}  // namespace cdnwae
