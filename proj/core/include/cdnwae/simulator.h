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

// Deterministic discrete-event model of one CDN point of presence.
//
// Users of each workload phase emit Poisson request streams; requests are
// routed round-robin to the running containers of their edge type. Every
// container is a single-server FIFO queue. A machine's cpu and link capacity
// are split evenly among its active containers, and a request's service time
// is the larger of its cpu time and its transfer time at that share. At every
// period boundary the machines report utilization and request counts, and
// the orchestrated topology re-plans its containers from that telemetry.

#ifndef CDNWAE_SIMULATOR_H_
#define CDNWAE_SIMULATOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdnwae/domain.h"
#include "cdnwae/orchestration.h"

namespace cdnwae {

enum class Topology { kBareMetal, kStaticContainers, kOrchestrated };

std::string_view TopologyName(Topology topology);
std::optional<Topology> ParseTopology(std::string_view name);

struct WorkloadPhase {
  FunctionType type = FunctionType::kSmallEdge;
  std::uint64_t total_users = 0;
  // Seconds until every user is active; users join in equal one-second steps.
  double ramp_up = 0.0;
  double requests_per_user_per_second = 1.0;
  // Bytes per response.
  double mean_response_size = 1.0;
  double duration = 0.0;
  // Offset of the phase from the start of the run.
  double start = 0.0;
};

struct MachineSpec {
  // Abstract service units per second.
  double cpu_capacity = 1.0;
  // Bytes per second on the output link.
  double link_capacity = 1.0;
};

enum class ServiceTimeModel { kExponential, kDeterministic };

std::string_view ServiceTimeModelName(ServiceTimeModel model);
std::optional<ServiceTimeModel> ParseServiceTimeModel(std::string_view name);

struct LatencyModelParams {
  // Service units per request, per edge type.
  std::array<double, kEdgeTypeCount> service_demand = {1.0, 1.0, 1.0, 1.0};
  // Requests a container holds, waiting plus in service; arrivals beyond it
  // are dropped.
  std::size_t queue_capacity = 10000;
  // Exponential draws a per-request size multiplier with mean one.
  ServiceTimeModel service_time = ServiceTimeModel::kExponential;
};

// Active users of `phase` at `t` seconds after the phase start: zero outside
// [0, duration), otherwise total * max(1, ceil(t)) / ramp_up capped at total.
std::uint64_t ActiveUsers(const WorkloadPhase& phase, double t);

struct RequestArrival {
  double time = 0.0;
  FunctionType type = FunctionType::kSmallEdge;
  std::uint32_t phase = 0;

  friend bool operator==(const RequestArrival&,
                         const RequestArrival&) = default;
};

// Merged arrival stream of all phases sorted by (time, phase). Each phase
// draws from its own generator derived from (seed, phase index).
std::vector<RequestArrival> GenerateWorkload(
    std::span<const WorkloadPhase> phases, std::uint64_t seed);

struct CompletedRequest {
  FunctionType type = FunctionType::kSmallEdge;
  MachineId machine;
  double arrival = 0.0;
  double completion = 0.0;

  double latency() const { return completion - arrival; }
};

struct PeriodTelemetry {
  std::vector<MachineTelemetry> machines;
  RequestVector requests{};
};

// The queueing core: containers, routing and capacity accounting. Time only
// moves forward.
class PopSimulator {
 public:
  PopSimulator(std::vector<MachineSpec> machines, AssignmentMatrix assignment,
               LatencyModelParams latency, std::uint64_t seed);

  double now() const { return now_; }
  const AssignmentMatrix& assignment() const { return assignment_; }
  std::size_t machine_count() const { return machines_.size(); }

  // Advances to `arrival.time`, then routes the request. Returns the machine
  // it was queued on, or nullopt if it was dropped (no running container of
  // its type or the chosen queue is full).
  std::optional<MachineId> Offer(const RequestArrival& arrival,
                                 double response_bytes);

  // Processes every completion up to and including `time`.
  void AdvanceTo(double time);
  void Step(double dt);

  // Requests completed since the last call.
  std::vector<CompletedRequest> TakeCompleted();

  // Utilization and arrivals since the previous call (or construction),
  // clamped to [0, 1]. Starts a new accounting period at now().
  PeriodTelemetry ClosePeriod(std::int64_t period_id);

  // Paused containers stop receiving requests but drain their queues.
  void SetAssignment(const AssignmentMatrix& assignment);

  // Service rate a container of `type` on `machine` would get right now,
  // in requests per second for a unit-size request.
  double ServiceRate(MachineId machine, FunctionType type,
                     double response_bytes) const;

  std::uint64_t offered() const { return offered_; }
  std::uint64_t served() const { return served_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t in_flight() const;

 private:
  struct Request {
    double arrival = 0.0;
    double size = 1.0;
    double bytes = 0.0;
    FunctionType type = FunctionType::kSmallEdge;
  };
  struct InService {
    Request request;
    double start = 0.0;
    double end = 0.0;
    double accrued_until = 0.0;
    double work = 0.0;
    double bytes = 0.0;
  };
  struct Container {
    bool running = false;
    std::vector<Request> waiting;  // FIFO; consumed from `head`
    std::size_t head = 0;
    std::optional<InService> in_service;

    std::size_t queued() const {
      return waiting.size() - head + (in_service ? 1 : 0);
    }
  };
  struct MachineCounters {
    double work = 0.0;
    double bytes = 0.0;
  };

  Container& container(std::size_t machine, std::size_t type) {
    return containers_[machine * kEdgeTypeCount + type];
  }
  const Container& container(std::size_t machine, std::size_t type) const {
    return containers_[machine * kEdgeTypeCount + type];
  }
  std::size_t ActiveContainers(std::size_t machine) const;
  void StartNext(std::size_t machine, std::size_t type);
  void Accrue(std::size_t machine, InService& job, double until);
  double DrawSize();

  std::vector<MachineSpec> machines_;
  AssignmentMatrix assignment_;
  LatencyModelParams latency_;
  std::vector<Container> containers_;
  std::array<std::size_t, kEdgeTypeCount> cursor_{};
  std::vector<MachineCounters> counters_;
  RequestVector period_requests_{};
  std::vector<CompletedRequest> completed_;
  std::mt19937_64 size_rng_;
  double now_ = 0.0;
  double period_start_ = 0.0;
  std::uint64_t offered_ = 0;
  std::uint64_t served_ = 0;
  std::uint64_t dropped_ = 0;
};

struct PoolConfig {
  std::string subnet = "10.20.0.0/24";
  std::string gateway = "10.20.0.1";
};

struct CostModel {
  double machine_unit_cost = 1.0;
  // Machines of the traditional PoP: DNS, load balancer, four edges,
  // mid-cache, plus extras such as the origin.
  std::size_t traditional_machines = 9;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::size_t machine_count = 3;
  MachineSpec machine;
  // Dedicated per-role servers of the bare-metal topology.
  MachineSpec bare_metal_machine;
  PoolConfig pool;
  std::vector<WorkloadPhase> phases;
  LatencyModelParams latency;
  OrchestrationParams orchestration;
  double period_seconds = 60.0;
  // Real-world length of one re-orchestration period; only used to report
  // real-world equivalent time.
  double reference_period_seconds = 600.0;
  CostModel cost;
  std::vector<Topology> topologies = {Topology::kBareMetal,
                                      Topology::kStaticContainers,
                                      Topology::kOrchestrated};
  std::uint64_t seed = 1;
  // Simulated seconds; zero means the end of the last phase.
  double duration = 0.0;
};

// Throws kConfigError naming the offending field.
void ValidateConfig(const ScenarioConfig& config);
double ScenarioHorizon(const ScenarioConfig& config);

struct TypeLatency {
  std::uint64_t count = 0;
  double mean = 0.0;
  double p95 = 0.0;
};

struct PeriodRecord {
  std::int64_t period = 0;
  double start = 0.0;
  double end = 0.0;
  std::array<TypeLatency, kEdgeTypeCount> latency{};
  std::vector<MachineTelemetry> machines;
  RequestVector requests{};
  std::size_t containers = 0;
  std::uint64_t served = 0;
  std::uint64_t dropped = 0;
  // Set when the orchestrator ran at the end of the period.
  std::optional<OrchestrationStatus> orchestration;
  std::size_t commands = 0;
};

struct MachineSummary {
  std::size_t machine = 0;
  // Hosted roles at the end of the run, e.g. "small_edge+vod_edge".
  std::string roles;
  double mean_cpu_utilization = 0.0;
  double mean_net_out_utilization = 0.0;
};

struct RunReport {
  std::string scenario;
  Topology topology = Topology::kOrchestrated;
  std::uint64_t seed = 0;
  double period_seconds = 0.0;
  double simulated_seconds = 0.0;
  double reference_equivalent_seconds = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t served = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
  double mean_latency = 0.0;
  std::array<TypeLatency, kEdgeTypeCount> latency_by_type{};
  std::size_t machine_count = 0;
  double cost = 0.0;
  std::vector<MachineSummary> machines;
  std::vector<PeriodRecord> periods;
};

// Called with each snapshot handed to the orchestrator and its outcome.
using OrchestrationObserver =
    std::function<void(const ValidatedSnapshot&, const OrchestrationOutcome&)>;

RunReport RunScenario(const ScenarioConfig& config, Topology topology,
                      const OrchestrationObserver& observer = {});

// One report per configured topology, in configuration order.
std::vector<RunReport> RunAllTopologies(const ScenarioConfig& config);

// Physical machines times unit cost; the bare-metal PoP counts
// cost.traditional_machines, the containerized ones machine_count.
double ComputeCost(Topology topology, const ScenarioConfig& config);

// 1 - containerized / traditional cost, as a fraction.
double CostReduction(const ScenarioConfig& config);

}  // namespace cdnwae

#endif  // CDNWAE_SIMULATOR_H_
