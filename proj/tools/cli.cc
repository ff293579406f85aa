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

#include "cli.h"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "cdnwae/codec.h"
#include "cdnwae/error.h"
#include "cdnwae/oracle.h"
#include "cdnwae/orchestration.h"
#include "cdnwae/service.h"
#include "cdnwae/simulator.h"
#include "http_server.h"

namespace cdnwae::cli {
namespace {

using nlohmann::json;

int Fail(std::ostream& err, const std::string& message) {
  err << "error: " << message << "\n";
  return 1;
}

std::string Dump(const json& value) { return value.dump(2) + "\n"; }

std::string Percent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f%%", 100.0 * fraction);
  return buffer;
}

std::string Millis(double seconds) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f ms", 1000.0 * seconds);
  return buffer;
}

struct LoadedSnapshot {
  ValidatedSnapshot snapshot;
  double threshold = 0.1;
};

LoadedSnapshot LoadSnapshot(const SnapshotOptions& options) {
  const SnapshotFile file = SnapshotFromJson(ReadJsonFile(options.snapshot));
  LoadedSnapshot out;
  out.snapshot =
      ValidateSnapshot(file.telemetry, file.requests, file.assignment);
  out.threshold = options.threshold.value_or(file.threshold.value_or(0.1));
  return out;
}

void Emit(const json& value, const std::optional<std::string>& out_file,
          std::ostream& out) {
  const std::string text = Dump(value);
  if (out_file) WriteTextFile(*out_file, text);
  out << text;
}

std::optional<spdlog::level::level_enum> ParseLogLevel(const std::string& s) {
  const auto level = spdlog::level::from_str(s);
  if (level == spdlog::level::off && s != "off") return std::nullopt;
  return level;
}

}  // namespace

int CmdSimulate(const SimulateOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    ScenarioConfig config = ConfigFromJson(ReadJsonFile(options.config));
    if (options.seed) config.seed = *options.seed;
    if (options.threshold) config.orchestration.threshold = *options.threshold;
    if (options.period) config.period_seconds = *options.period;
    if (options.topology) {
      const auto topology = ParseTopology(*options.topology);
      if (!topology) {
        throw Error(ErrorCode::kConfigError,
                    "--topology: unknown topology '" + *options.topology + "'");
      }
      config.topologies = {*topology};
    }
    ValidateConfig(config);

    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) {
      throw Error(ErrorCode::kIoError,
                  "cannot create " + options.out_dir + ": " + ec.message());
    }
    const std::filesystem::path dir(options.out_dir);

    const std::vector<RunReport> reports = RunAllTopologies(config);
    for (const RunReport& report : reports) {
      const std::string name(TopologyName(report.topology));
      WriteTextFile((dir / (name + ".report.json")).string(),
                    Dump(ReportToJson(report)));
      WriteTextFile((dir / (name + ".periods.csv")).string(),
                    ReportToCsv(report));
    }
    const json summary = ComparisonToJson(reports, config);
    WriteTextFile((dir / "summary.json").string(), Dump(summary));

    const RunReport* bare = nullptr;
    for (const RunReport& r : reports) {
      if (r.topology == Topology::kBareMetal) bare = &r;
    }
    out << "scenario " << config.name << " seed " << config.seed << "\n";
    for (const RunReport& r : reports) {
      out << "  " << TopologyName(r.topology) << ": mean latency "
          << Millis(r.mean_latency) << ", served " << r.served << ", dropped "
          << r.dropped << ", cost " << r.cost;
      if (bare != nullptr && bare != &r && bare->mean_latency > 0.0) {
        out << ", latency reduction vs bare_metal "
            << Percent(1.0 - r.mean_latency / bare->mean_latency);
      }
      out << "\n";
      for (const MachineSummary& m : r.machines) {
        out << "    machine " << m.machine << " ["
            << (m.roles.empty() ? "idle" : m.roles) << "] cpu "
            << Percent(m.mean_cpu_utilization) << " net "
            << Percent(m.mean_net_out_utilization) << "\n";
      }
    }
    out << "  cost reduction " << Percent(CostReduction(config)) << "\n";
    out << "  reports written to " << options.out_dir << "\n";
    return 0;
  } catch (const Error& e) {
    return Fail(err, e.what());
  }
}

int CmdOrchestrate(const SnapshotOptions& options, std::ostream& out,
                   std::ostream& err) {
  try {
    const LoadedSnapshot loaded = LoadSnapshot(options);
    OrchestrationParams params;
    params.threshold = loaded.threshold;
    const OrchestrationOutcome outcome = Orchestrate(loaded.snapshot, params);
    json body = OutcomeToJson(outcome);
    body["threshold"] = loaded.threshold;
    Emit(body, options.out_file, out);
    return 0;
  } catch (const Error& e) {
    return Fail(err, e.what());
  }
}

int CmdOracle(const SnapshotOptions& options, std::ostream& out,
              std::ostream& err) {
  try {
    const LoadedSnapshot loaded = LoadSnapshot(options);
    const OracleResult oracle =
        ExactMinContainers(loaded.snapshot, loaded.threshold);
    OrchestrationParams params;
    params.threshold = loaded.threshold;
    const OrchestrationOutcome outcome = Orchestrate(loaded.snapshot, params);
    const FeasibilityReport feasibility =
        CheckFeasible(outcome.result, loaded.snapshot, loaded.threshold);
    const std::size_t count = outcome.result.Count();
    json body = {
        {"version", kFormatVersion},
        {"threshold", loaded.threshold},
        {"verdict", oracle.feasible ? "feasible" : "infeasible"},
        {"oracle", OracleToJson(oracle)},
        {"heuristic",
         {{"status", OrchestrationStatusName(outcome.status)},
          {"container_count", count},
          {"result", MatrixToJson(outcome.result)},
          {"feasible", feasibility.feasible}}},
        {"gap", oracle.feasible
                    ? json(static_cast<std::int64_t>(count) -
                           static_cast<std::int64_t>(oracle.optimal_count))
                    : json(nullptr)}};
    Emit(body, options.out_file, out);
    return 0;
  } catch (const Error& e) {
    return Fail(err, e.what());
  }
}

int CmdCompare(const CompareOptions& options, std::ostream& out,
               std::ostream& err) {
  try {
    const RunReport base = ReportFromJson(ReadJsonFile(options.baseline));
    const RunReport cand = ReportFromJson(ReadJsonFile(options.candidate));
    auto change = [](double from, double to) -> json {
      if (from == 0.0) return nullptr;
      return 100.0 * (to - from) / from;
    };
    auto side = [](const RunReport& r) {
      return json{{"topology", TopologyName(r.topology)},
                  {"scenario", r.scenario},
                  {"seed", r.seed},
                  {"mean_latency", r.mean_latency},
                  {"served", r.served},
                  {"dropped", r.dropped},
                  {"cost", r.cost}};
    };
    json by_type = json::object();
    for (std::size_t m = 0; m < kEdgeTypeCount; ++m) {
      by_type[std::string(FunctionTypeName(EdgeTypeAt(m)))] = {
          {"baseline_mean", base.latency_by_type[m].mean},
          {"candidate_mean", cand.latency_by_type[m].mean},
          {"change_percent", change(base.latency_by_type[m].mean,
                                    cand.latency_by_type[m].mean)}};
    }
    const json body = {
        {"version", kFormatVersion},
        {"baseline", side(base)},
        {"candidate", side(cand)},
        {"mean_latency_change_percent",
         change(base.mean_latency, cand.mean_latency)},
        {"cost_change_percent", change(base.cost, cand.cost)},
        {"latency_by_type", by_type}};
    Emit(body, options.out_file, out);
    return 0;
  } catch (const Error& e) {
    return Fail(err, e.what());
  }
}

int CmdServe(const ServeOptions& options, const std::atomic<bool>& stop,
             std::ostream& out, std::ostream& err) {
  try {
    ServiceConfig config = ServiceConfigFromJson(ReadJsonFile(options.config));
    if (const char* level = std::getenv("WAE_LOG_LEVEL")) {
      const auto parsed = ParseLogLevel(level);
      if (!parsed) {
        throw Error(ErrorCode::kConfigError,
                    std::string("WAE_LOG_LEVEL: unknown level '") + level + "'");
      }
      spdlog::set_level(*parsed);
    }
    if (const char* bind = std::getenv("WAE_BIND_ADDRESS")) {
      const std::string text(bind);
      const auto colon = text.rfind(':');
      config.bind_address = text.substr(0, colon);
      if (colon != std::string::npos) {
        try {
          config.port = std::stoi(text.substr(colon + 1));
        } catch (const std::exception&) {
          throw Error(ErrorCode::kConfigError,
                      "WAE_BIND_ADDRESS: bad port in '" + text + "'");
        }
      }
    }
    if (const char* period = std::getenv("WAE_PERIOD_SECONDS")) {
      try {
        config.period_seconds = std::stod(period);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kConfigError,
                    std::string("WAE_PERIOD_SECONDS: not a number '") + period +
                        "'");
      }
    }
    if (options.period) config.period_seconds = *options.period;
    if (options.state_file) config.state_file = *options.state_file;
    ValidateServiceConfig(config);

    WaeService service(config);
    HttpFrontend http(service);
    http.Bind(config.bind_address, config.port);
    http.Start();
    out << "listening on " << config.bind_address << ":" << http.port()
        << " period " << config.period_seconds << " s" << std::endl;
    spdlog::info("serving {} machines on {}:{}", config.machine_count,
                 config.bind_address, http.port());

    const auto started = std::chrono::steady_clock::now();
    while (!stop.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      const double now = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - started)
                             .count();
      if (auto summary = service.Tick(now)) {
        if (summary->skipped) {
          spdlog::warn("period {} skipped: {}", summary->period,
                       summary->message);
        } else {
          spdlog::info("period {} round {}: {} with {} commands",
                       summary->period, summary->round, summary->message,
                       summary->command_count);
        }
      }
    }
    http.Stop();

    if (!config.state_file.empty()) {
      json state = ServiceStateToJson(service.State());
      const auto last = service.LastRound();
      state["last_round"] = last ? RoundSummaryToJson(*last) : json(nullptr);
      WriteTextFile(config.state_file, Dump(state));
      out << "state written to " << config.state_file << std::endl;
    }
    return 0;
  } catch (const Error& e) {
    return Fail(err, e.what());
  }
}

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err, const std::atomic<bool>& stop) {
  CLI::App app{"CDN workload automation engine"};
  app.name("cdnwae");
  app.require_subcommand(1);

  SimulateOptions simulate;
  auto* sim = app.add_subcommand(
      "simulate", "Run the configured topologies and write reports");
  sim->add_option("--config", simulate.config, "Scenario config (JSON)")
      ->required();
  sim->add_option("--seed", simulate.seed, "Override the config seed");
  sim->add_option("--out", simulate.out_dir, "Output directory")
      ->capture_default_str();
  sim->add_option("--topology", simulate.topology,
                  "Run only this topology (bare_metal, static_containers, "
                  "orchestrated)");
  sim->add_option("--threshold", simulate.threshold,
                  "Override the orchestration threshold");
  sim->add_option("--period", simulate.period,
                  "Override the re-orchestration period in seconds");

  SnapshotOptions orchestrate;
  auto* orch = app.add_subcommand(
      "orchestrate", "Run the heuristic once on a snapshot file");
  orch->add_option("snapshot", orchestrate.snapshot, "Snapshot file (JSON)")
      ->required();
  orch->add_option("--threshold", orchestrate.threshold,
                   "Override the snapshot threshold");
  orch->add_option("--out", orchestrate.out_file, "Also write the result here");

  SnapshotOptions oracle;
  auto* orc = app.add_subcommand(
      "oracle", "Exact minimum-container placement for a snapshot file");
  orc->add_option("snapshot", oracle.snapshot, "Snapshot file (JSON)")
      ->required();
  orc->add_option("--threshold", oracle.threshold,
                  "Override the snapshot threshold");
  orc->add_option("--out", oracle.out_file, "Also write the result here");

  CompareOptions compare;
  auto* cmp = app.add_subcommand("compare", "Diff two run reports");
  cmp->add_option("baseline", compare.baseline, "Baseline report")->required();
  cmp->add_option("candidate", compare.candidate, "Candidate report")
      ->required();
  cmp->add_option("--out", compare.out_file, "Also write the diff here");

  ServeOptions serve;
  auto* srv = app.add_subcommand("serve", "Run the HTTP service");
  srv->add_option("--config", serve.config, "Service config (JSON)")
      ->required();
  srv->add_option("--period", serve.period,
                  "Override the re-orchestration period in seconds");
  srv->add_option("--out", serve.state_file,
                  "State snapshot written on shutdown");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (*sim) return CmdSimulate(simulate, out, err);
  if (*orch) return CmdOrchestrate(orchestrate, out, err);
  if (*orc) return CmdOracle(oracle, out, err);
  if (*cmp) return CmdCompare(compare, out, err);
  if (*srv) return CmdServe(serve, stop, out, err);
  return Fail(err, "no subcommand");
}

}  // namespace cdnwae::cli
