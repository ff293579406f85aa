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

#include "cdnwae/simulator.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <utility>

#include "cdnwae/discovery.h"
#include "cdnwae/error.h"
#include "cdnwae/ip_pool.h"

namespace cdnwae {
namespace {

std::mt19937_64 SeededGenerator(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), stream,
                    0x9E3779B9U};
  return std::mt19937_64(seq);
}

// Uniform on the open interval (0, 1).
double OpenUniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double Exponential(std::mt19937_64& rng, double rate) {
  return -std::log(OpenUniform(rng)) / rate;
}

constexpr std::uint32_t kSizeStream = 0xFFFF0001U;

[[noreturn]] void ConfigFail(const std::string& field,
                             const std::string& message) {
  throw Error(ErrorCode::kConfigError, field + ": " + message);
}

TypeLatency Summarize(std::vector<double>& latencies) {
  TypeLatency out;
  out.count = latencies.size();
  if (latencies.empty()) return out;
  double sum = 0.0;
  for (double v : latencies) sum += v;
  out.mean = sum / static_cast<double>(latencies.size());
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(latencies.size())));
  const auto nth = latencies.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(latencies.begin(), nth, latencies.end());
  out.p95 = *nth;
  return out;
}

std::string Roles(const AssignmentMatrix& assignment, std::size_t machine) {
  std::string roles;
  for (std::size_t m = 0; m < assignment.cols(); ++m) {
    if (!assignment.at(machine, m)) continue;
    if (!roles.empty()) roles += "+";
    roles += FunctionTypeName(EdgeTypeAt(m));
  }
  return roles;
}

}  // namespace

std::string_view TopologyName(Topology topology) {
  switch (topology) {
    case Topology::kBareMetal: return "bare_metal";
    case Topology::kStaticContainers: return "static_containers";
    case Topology::kOrchestrated: return "orchestrated";
  }
  return "unknown";
}

std::optional<Topology> ParseTopology(std::string_view name) {
  for (auto t : {Topology::kBareMetal, Topology::kStaticContainers,
                 Topology::kOrchestrated}) {
    if (TopologyName(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view ServiceTimeModelName(ServiceTimeModel model) {
  return model == ServiceTimeModel::kExponential ? "exponential"
                                                 : "deterministic";
}

std::optional<ServiceTimeModel> ParseServiceTimeModel(std::string_view name) {
  if (name == "exponential") return ServiceTimeModel::kExponential;
  if (name == "deterministic") return ServiceTimeModel::kDeterministic;
  return std::nullopt;
}

std::uint64_t ActiveUsers(const WorkloadPhase& phase, double t) {
  if (t < 0.0 || t >= phase.duration || phase.total_users == 0) return 0;
  if (phase.ramp_up <= 0.0) return phase.total_users;
  const double step = std::max(1.0, std::ceil(t));
  const double users =
      std::floor(static_cast<double>(phase.total_users) * step / phase.ramp_up);
  return std::min(phase.total_users, static_cast<std::uint64_t>(users));
}

std::vector<RequestArrival> GenerateWorkload(
    std::span<const WorkloadPhase> phases, std::uint64_t seed) {
  std::vector<RequestArrival> arrivals;
  for (std::uint32_t p = 0; p < phases.size(); ++p) {
    const WorkloadPhase& phase = phases[p];
    if (phase.total_users == 0 || phase.duration <= 0.0) continue;
    std::mt19937_64 rng = SeededGenerator(seed, p);
    double t = 0.0;
    while (t < phase.duration) {
      // Users join at whole seconds; within [k, k + 1) the population is
      // the one reached at k + 1.
      const double whole = std::floor(t);
      double segment_end = whole + 1.0 < phase.ramp_up ? whole + 1.0
                                                       : phase.duration;
      segment_end = std::min(segment_end, phase.duration);
      const double midpoint =
          0.5 * (whole + std::min(whole + 1.0, phase.duration));
      const std::uint64_t users = ActiveUsers(phase, midpoint);
      const double rate =
          static_cast<double>(users) * phase.requests_per_user_per_second;
      if (rate <= 0.0) {
        t = segment_end;
        continue;
      }
      const double next = t + Exponential(rng, rate);
      if (next >= segment_end) {
        t = segment_end;
        continue;
      }
      t = next;
      arrivals.push_back({phase.start + t, phase.type, p});
    }
  }
  std::stable_sort(arrivals.begin(), arrivals.end(),
                   [](const RequestArrival& a, const RequestArrival& b) {
                     if (a.time != b.time) return a.time < b.time;
                     return a.phase < b.phase;
                   });
  return arrivals;
}

PopSimulator::PopSimulator(std::vector<MachineSpec> machines,
                           AssignmentMatrix assignment,
                           LatencyModelParams latency, std::uint64_t seed)
    : machines_(std::move(machines)),
      assignment_(std::move(assignment)),
      latency_(latency),
      containers_(machines_.size() * kEdgeTypeCount),
      counters_(machines_.size()),
      size_rng_(SeededGenerator(seed, kSizeStream)) {
  if (machines_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one machine required");
  }
  for (const MachineSpec& spec : machines_) {
    if (!(spec.cpu_capacity > 0.0) || !(spec.link_capacity > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "machine capacities must be positive");
    }
  }
  for (double demand : latency_.service_demand) {
    if (!(demand > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "service demands must be positive");
    }
  }
  if (latency_.queue_capacity < 1) {
    throw Error(ErrorCode::kInvalidArgument, "queue capacity must be >= 1");
  }
  SetAssignment(assignment_);
}

void PopSimulator::SetAssignment(const AssignmentMatrix& assignment) {
  if (assignment.rows() != machines_.size() ||
      assignment.cols() != kEdgeTypeCount) {
    throw Error(ErrorCode::kDimensionMismatch,
                "assignment must be " + std::to_string(machines_.size()) +
                    "x" + std::to_string(kEdgeTypeCount));
  }
  assignment_ = assignment;
  for (std::size_t n = 0; n < machines_.size(); ++n) {
    for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
      container(n, m).running = assignment.at(n, m);
    }
  }
}

std::size_t PopSimulator::ActiveContainers(std::size_t machine) const {
  std::size_t active = 0;
  for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
    const Container& c = container(machine, m);
    if (c.running || c.queued() > 0) ++active;
  }
  return active;
}

double PopSimulator::ServiceRate(MachineId machine, FunctionType type,
                                 double response_bytes) const {
  const MachineSpec& spec = machines_.at(machine.index);
  const double share =
      static_cast<double>(std::max<std::size_t>(1, ActiveContainers(machine.index)));
  const double cpu_time =
      latency_.service_demand[TypeIndex(type)] * share / spec.cpu_capacity;
  const double link_time = response_bytes * share / spec.link_capacity;
  return 1.0 / std::max(cpu_time, link_time);
}

double PopSimulator::DrawSize() {
  if (latency_.service_time == ServiceTimeModel::kDeterministic) return 1.0;
  return -std::log(OpenUniform(size_rng_));
}

void PopSimulator::StartNext(std::size_t machine, std::size_t type) {
  Container& c = container(machine, type);
  if (c.in_service || c.head == c.waiting.size()) return;
  // The container still counts as active while its last request is popped.
  const double share = static_cast<double>(
      std::max<std::size_t>(1, ActiveContainers(machine)));
  const Request request = c.waiting[c.head++];
  if (c.head == c.waiting.size()) {
    c.waiting.clear();
    c.head = 0;
  } else if (c.head >= 4096 && 2 * c.head >= c.waiting.size()) {
    c.waiting.erase(c.waiting.begin(),
                    c.waiting.begin() + static_cast<std::ptrdiff_t>(c.head));
    c.head = 0;
  }

  const MachineSpec& spec = machines_[machine];
  InService job;
  job.request = request;
  job.work = latency_.service_demand[type] * request.size;
  job.bytes = request.bytes * request.size;
  const double cpu_time = job.work * share / spec.cpu_capacity;
  const double link_time = job.bytes * share / spec.link_capacity;
  job.start = now_;
  job.accrued_until = now_;
  job.end = now_ + std::max(cpu_time, link_time);
  c.in_service = job;
}

void PopSimulator::Accrue(std::size_t machine, InService& job, double until) {
  const double duration = job.end - job.start;
  double fraction = 0.0;
  if (duration > 0.0) {
    fraction = (until - job.accrued_until) / duration;
  } else if (until >= job.end && job.accrued_until <= job.start) {
    fraction = 1.0;
  }
  counters_[machine].work += job.work * fraction;
  counters_[machine].bytes += job.bytes * fraction;
  job.accrued_until = until;
}

void PopSimulator::AdvanceTo(double time) {
  for (;;) {
    std::size_t best = containers_.size();
    double best_end = time;
    for (std::size_t i = 0; i < containers_.size(); ++i) {
      const Container& c = containers_[i];
      if (c.in_service && c.in_service->end <= best_end &&
          (best == containers_.size() || c.in_service->end < best_end)) {
        best = i;
        best_end = c.in_service->end;
      }
    }
    if (best == containers_.size()) break;
    const std::size_t machine = best / kEdgeTypeCount;
    const std::size_t type = best % kEdgeTypeCount;
    Container& c = containers_[best];
    now_ = std::max(now_, best_end);
    Accrue(machine, *c.in_service, c.in_service->end);
    completed_.push_back({c.in_service->request.type, MachineId{machine},
                          c.in_service->request.arrival, c.in_service->end});
    ++served_;
    c.in_service.reset();
    StartNext(machine, type);
  }
  now_ = std::max(now_, time);
}

void PopSimulator::Step(double dt) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "step must be positive");
  }
  AdvanceTo(now_ + dt);
}

std::optional<MachineId> PopSimulator::Offer(const RequestArrival& arrival,
                                             double response_bytes) {
  if (arrival.time < now_) {
    throw Error(ErrorCode::kInvalidArgument,
                "arrival at " + std::to_string(arrival.time) +
                    " precedes the clock " + std::to_string(now_));
  }
  if (!IsEdgeType(arrival.type)) {
    throw Error(ErrorCode::kInvalidArgument, "request for a non-edge role");
  }
  AdvanceTo(arrival.time);
  const std::size_t type = TypeIndex(arrival.type);
  ++offered_;
  ++period_requests_[type];
  const double size = DrawSize();

  std::size_t candidates = 0;
  for (std::size_t n = 0; n < machines_.size(); ++n) {
    if (container(n, type).running) ++candidates;
  }
  if (candidates == 0) {
    ++dropped_;
    return std::nullopt;
  }
  std::size_t pick = cursor_[type]++ % candidates;
  std::size_t machine = 0;
  for (; machine < machines_.size(); ++machine) {
    if (!container(machine, type).running) continue;
    if (pick == 0) break;
    --pick;
  }
  Container& c = container(machine, type);
  if (c.queued() >= latency_.queue_capacity) {
    ++dropped_;
    return std::nullopt;
  }
  c.waiting.push_back({arrival.time, size, response_bytes, arrival.type});
  StartNext(machine, type);
  return MachineId{machine};
}

std::vector<CompletedRequest> PopSimulator::TakeCompleted() {
  return std::exchange(completed_, {});
}

PeriodTelemetry PopSimulator::ClosePeriod(std::int64_t period_id) {
  for (std::size_t i = 0; i < containers_.size(); ++i) {
    Container& c = containers_[i];
    if (c.in_service) Accrue(i / kEdgeTypeCount, *c.in_service, now_);
  }
  const double length = now_ - period_start_;
  PeriodTelemetry out;
  out.requests = period_requests_;
  out.machines.reserve(machines_.size());
  for (std::size_t n = 0; n < machines_.size(); ++n) {
    double cpu = 0.0;
    double net = 0.0;
    if (length > 0.0) {
      cpu = counters_[n].work / (machines_[n].cpu_capacity * length);
      net = counters_[n].bytes / (machines_[n].link_capacity * length);
    }
    out.machines.push_back({MachineId{n}, std::clamp(cpu, 0.0, 1.0),
                            std::clamp(net, 0.0, 1.0), period_id});
    counters_[n] = {};
  }
  period_requests_ = {};
  period_start_ = now_;
  return out;
}

std::uint64_t PopSimulator::in_flight() const {
  std::uint64_t total = 0;
  for (const Container& c : containers_) total += c.queued();
  return total;
}

void ValidateConfig(const ScenarioConfig& config) {
  if (config.machine_count < 1) ConfigFail("machine_count", "must be >= 1");
  for (const auto& [field, spec] :
       {std::pair<std::string, MachineSpec>{"machine", config.machine},
        {"bare_metal_machine", config.bare_metal_machine}}) {
    if (!(spec.cpu_capacity > 0.0)) {
      ConfigFail(field + ".cpu_capacity", "must be > 0");
    }
    if (!(spec.link_capacity > 0.0)) {
      ConfigFail(field + ".link_capacity", "must be > 0");
    }
  }
  for (std::size_t i = 0; i < config.phases.size(); ++i) {
    const WorkloadPhase& p = config.phases[i];
    const std::string field = "phases[" + std::to_string(i) + "]";
    if (!IsEdgeType(p.type)) ConfigFail(field + ".type", "not an edge type");
    if (!(p.duration > 0.0)) ConfigFail(field + ".duration", "must be > 0");
    if (!(p.ramp_up >= 0.0) || p.ramp_up > p.duration) {
      ConfigFail(field + ".ramp_up", "must lie in [0, duration]");
    }
    if (!(p.requests_per_user_per_second > 0.0)) {
      ConfigFail(field + ".requests_per_user_per_second", "must be > 0");
    }
    if (!(p.mean_response_size > 0.0)) {
      ConfigFail(field + ".mean_response_size", "must be > 0");
    }
    if (!(p.start >= 0.0)) ConfigFail(field + ".start", "must be >= 0");
  }
  for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
    if (!(config.latency.service_demand[m] > 0.0)) {
      ConfigFail("latency.service_demand." +
                     std::string(FunctionTypeName(EdgeTypeAt(m))),
                 "must be > 0");
    }
  }
  if (config.latency.queue_capacity < 1) {
    ConfigFail("latency.queue_capacity", "must be >= 1");
  }
  if (!(config.orchestration.threshold > 0.0 &&
        config.orchestration.threshold < 1.0)) {
    ConfigFail("orchestration.threshold", "must lie in (0, 1)");
  }
  if (config.orchestration.iteration_cap < 1) {
    ConfigFail("orchestration.iteration_cap", "must be >= 1");
  }
  if (!(config.period_seconds > 0.0)) {
    ConfigFail("orchestration.period_seconds", "must be > 0");
  }
  if (!(config.reference_period_seconds > 0.0)) {
    ConfigFail("orchestration.reference_period_seconds", "must be > 0");
  }
  if (!(config.cost.machine_unit_cost > 0.0)) {
    ConfigFail("cost.machine_unit_cost", "must be > 0");
  }
  if (config.cost.traditional_machines < 1) {
    ConfigFail("cost.traditional_machines", "must be >= 1");
  }
  if (config.topologies.empty()) ConfigFail("topologies", "must not be empty");
  if (!(config.duration >= 0.0)) ConfigFail("duration", "must be >= 0");
  try {
    const AddressPool pool =
        AddressPool::FromStrings(config.pool.subnet, config.pool.gateway);
    if (pool.capacity() < config.machine_count * kEdgeTypeCount) {
      ConfigFail("pool.subnet", "has " + std::to_string(pool.capacity()) +
                                    " usable addresses, need " +
                                    std::to_string(config.machine_count *
                                                   kEdgeTypeCount));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    ConfigFail("pool", e.what());
  }
}

double ScenarioHorizon(const ScenarioConfig& config) {
  if (config.duration > 0.0) return config.duration;
  double horizon = 0.0;
  for (const WorkloadPhase& p : config.phases) {
    horizon = std::max(horizon, p.start + p.duration);
  }
  return horizon;
}

double ComputeCost(Topology topology, const ScenarioConfig& config) {
  const std::size_t machines = topology == Topology::kBareMetal
                                   ? config.cost.traditional_machines
                                   : config.machine_count;
  return static_cast<double>(machines) * config.cost.machine_unit_cost;
}

double CostReduction(const ScenarioConfig& config) {
  return 1.0 - ComputeCost(Topology::kOrchestrated, config) /
                   ComputeCost(Topology::kBareMetal, config);
}

RunReport RunScenario(const ScenarioConfig& config, Topology topology,
                      const OrchestrationObserver& observer) {
  ValidateConfig(config);
  const double horizon = ScenarioHorizon(config);
  const double period = config.period_seconds;

  std::vector<MachineSpec> specs;
  AssignmentMatrix initial;
  if (topology == Topology::kBareMetal) {
    specs.assign(kEdgeTypeCount, config.bare_metal_machine);
    initial = AssignmentMatrix(kEdgeTypeCount, kEdgeTypeCount);
    for (std::size_t m = 0; m < kEdgeTypeCount; ++m) initial.Set(m, m, true);
  } else {
    specs.assign(config.machine_count, config.machine);
    initial = RoundRobinAssignment(config.machine_count);
  }
  PopSimulator sim(specs, initial, config.latency, config.seed);

  std::optional<AddressPool> pool;
  ContainerRecords records;
  if (topology == Topology::kOrchestrated) {
    pool = AddressPool::FromStrings(config.pool.subnet, config.pool.gateway);
    records = Bootstrap(initial, *pool);
  }

  RunReport report;
  report.scenario = config.name;
  report.topology = topology;
  report.seed = config.seed;
  report.period_seconds = period;
  report.simulated_seconds = horizon;
  report.reference_equivalent_seconds =
      horizon * config.reference_period_seconds / period;
  report.machine_count = specs.size();
  report.cost = ComputeCost(topology, config);

  std::array<std::vector<double>, kEdgeTypeCount> all_latencies;
  std::vector<double> cpu_time(specs.size(), 0.0);
  std::vector<double> net_time(specs.size(), 0.0);
  std::int64_t index = 0;
  double period_start = 0.0;
  std::uint64_t dropped_before = 0;

  auto close_period = [&](double end) {
    sim.AdvanceTo(end);
    PeriodRecord record;
    record.period = index;
    record.start = period_start;
    record.end = end;
    std::array<std::vector<double>, kEdgeTypeCount> latencies;
    const std::vector<CompletedRequest> completed = sim.TakeCompleted();
    for (const CompletedRequest& r : completed) {
      latencies[TypeIndex(r.type)].push_back(r.latency());
      all_latencies[TypeIndex(r.type)].push_back(r.latency());
    }
    for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
      record.latency[m] = Summarize(latencies[m]);
    }
    const PeriodTelemetry telemetry = sim.ClosePeriod(index);
    record.machines = telemetry.machines;
    record.requests = telemetry.requests;
    record.containers = sim.assignment().Count();
    record.served = completed.size();
    record.dropped = sim.dropped() - dropped_before;
    dropped_before = sim.dropped();
    for (std::size_t n = 0; n < specs.size(); ++n) {
      cpu_time[n] += telemetry.machines[n].cpu_utilization * (end - period_start);
      net_time[n] +=
          telemetry.machines[n].net_out_utilization * (end - period_start);
    }

    if (topology == Topology::kOrchestrated && end < horizon) {
      const ValidatedSnapshot snapshot = ValidateSnapshot(
          telemetry.machines, telemetry.requests, RunningMatrix(records));
      const OrchestrationOutcome outcome =
          Orchestrate(snapshot, config.orchestration);
      if (observer) observer(snapshot, outcome);
      const std::vector<AssignmentCommand> commands =
          Diff(records, outcome.result, *pool);
      records = Apply(records, commands, *pool);
      sim.SetAssignment(RunningMatrix(records));
      record.orchestration = outcome.status;
      record.commands = commands.size();
    }
    report.periods.push_back(std::move(record));
    ++index;
    period_start = end;
  };

  const std::vector<RequestArrival> arrivals =
      GenerateWorkload(config.phases, config.seed);
  for (const RequestArrival& arrival : arrivals) {
    if (arrival.time >= horizon) break;
    while (arrival.time >= static_cast<double>(index + 1) * period) {
      close_period(static_cast<double>(index + 1) * period);
    }
    sim.Offer(arrival, config.phases[arrival.phase].mean_response_size);
  }
  while (period_start < horizon) {
    close_period(std::min(static_cast<double>(index + 1) * period, horizon));
  }

  report.generated = sim.offered();
  report.served = sim.served();
  report.dropped = sim.dropped();
  report.in_flight = sim.in_flight();
  double latency_sum = 0.0;
  for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
    for (double v : all_latencies[m]) latency_sum += v;
    report.latency_by_type[m] = Summarize(all_latencies[m]);
  }
  report.mean_latency =
      report.served > 0 ? latency_sum / static_cast<double>(report.served)
                        : 0.0;
  for (std::size_t n = 0; n < specs.size(); ++n) {
    MachineSummary summary;
    summary.machine = n;
    summary.roles = Roles(sim.assignment(), n);
    if (horizon > 0.0) {
      summary.mean_cpu_utilization = cpu_time[n] / horizon;
      summary.mean_net_out_utilization = net_time[n] / horizon;
    }
    report.machines.push_back(std::move(summary));
  }
  return report;
}

std::vector<RunReport> RunAllTopologies(const ScenarioConfig& config) {
  ValidateConfig(config);
  // Runs share nothing mutable, so each topology gets its own thread.
  std::vector<std::future<RunReport>> runs;
  runs.reserve(config.topologies.size());
  for (Topology topology : config.topologies) {
    runs.push_back(std::async(std::launch::async, [&config, topology] {
      return RunScenario(config, topology);
    }));
  }
  std::vector<RunReport> reports;
  reports.reserve(runs.size());
  for (auto& run : runs) reports.push_back(run.get());
  return reports;
}

}  // namespace cdnwae
