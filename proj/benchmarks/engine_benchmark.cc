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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "cdnwae/codec.h"
#include "cdnwae/discovery.h"
#include "cdnwae/domain.h"
#include "cdnwae/normalization.h"
#include "cdnwae/oracle.h"
#include "cdnwae/orchestration.h"
#include "cdnwae/simulator.h"

namespace cdnwae {
namespace {

ValidatedSnapshot RandomSnapshot(std::size_t machines, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<MachineTelemetry> telemetry;
  for (std::size_t n = 0; n < machines; ++n) {
    telemetry.push_back({MachineId{n}, unit(rng), unit(rng), 0});
  }
  RequestVector requests{};
  for (auto& r : requests) r = rng() % 5000;
  AssignmentMatrix a(machines, kEdgeTypeCount);
  for (std::size_t n = 0; n < machines; ++n) {
    for (std::size_t m = 0; m < kEdgeTypeCount; ++m) a.Set(n, m, rng() % 2);
  }
  return ValidateSnapshot(telemetry, requests, a);
}

void BM_Orchestrate(benchmark::State& state) {
  const auto snapshot =
      RandomSnapshot(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Orchestrate(snapshot));
  }
}
BENCHMARK(BM_Orchestrate)->Arg(3)->Arg(8)->Arg(64)->Arg(512);

void BM_ExactMinContainers(benchmark::State& state) {
  const auto snapshot =
      RandomSnapshot(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ExactMinContainers(snapshot));
  }
  state.SetItemsProcessed(state.iterations() *
                          (std::int64_t{1} << (state.range(0) * 4)));
}
BENCHMARK(BM_ExactMinContainers)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Normalize(benchmark::State& state) {
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(3);
  for (double& v : values) v = static_cast<double>(rng() % 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Normalize(std::span<const double>(values)));
  }
}
BENCHMARK(BM_Normalize)->Arg(4)->Arg(1024);

void BM_DiffApply(benchmark::State& state) {
  const auto machines = static_cast<std::size_t>(state.range(0));
  auto pool = AddressPool::FromStrings("10.0.0.0/20", "10.0.0.1");
  const auto records = Bootstrap(RoundRobinAssignment(machines), pool);
  AssignmentMatrix target(machines, kEdgeTypeCount);
  for (std::size_t n = 0; n < machines; ++n) target.Set(n, n % 4, true);
  for (std::size_t n = 0; n < machines; n += 2) target.Set(n, (n + 1) % 4, true);
  for (auto _ : state) {
    AddressPool scratch = pool;
    benchmark::DoNotOptimize(
        Apply(records, Diff(records, target, scratch), scratch));
  }
}
BENCHMARK(BM_DiffApply)->Arg(3)->Arg(64);

void BM_PopScenario(benchmark::State& state) {
  const auto config = ConfigFromJson(
      ReadJsonFile(std::string(CDNWAE_SOURCE_DIR) +
                   "/configs/pop_scenario.json"));
  const auto topology = static_cast<Topology>(state.range(0));
  for (auto _ : state) {
    const RunReport report = RunScenario(config, topology);
    state.counters["requests"] = static_cast<double>(report.generated);
    benchmark::DoNotOptimize(report.mean_latency);
  }
  state.SetLabel(std::string(TopologyName(topology)));
}
BENCHMARK(BM_PopScenario)
    ->Arg(static_cast<int>(Topology::kBareMetal))
    ->Arg(static_cast<int>(Topology::kOrchestrated))
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cdnwae

BENCHMARK_MAIN();
