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

// Subcommands of the cdnwae tool. Each returns the process exit status: zero
// iff nothing was written to `err`.

#ifndef CDNWAE_TOOLS_CLI_H_
#define CDNWAE_TOOLS_CLI_H_

#include <atomic>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace cdnwae::cli {

struct SimulateOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::optional<std::string> topology;
  std::optional<double> threshold;
  std::optional<double> period;
};

// Writes <topology>.report.json and <topology>.periods.csv per topology plus
// summary.json into out_dir.
int CmdSimulate(const SimulateOptions& options, std::ostream& out,
                std::ostream& err);

struct SnapshotOptions {
  std::string snapshot;
  std::optional<double> threshold;
  // Also written here when set; stdout always gets the result.
  std::optional<std::string> out_file;
};

int CmdOrchestrate(const SnapshotOptions& options, std::ostream& out,
                   std::ostream& err);
int CmdOracle(const SnapshotOptions& options, std::ostream& out,
              std::ostream& err);

struct CompareOptions {
  std::string baseline;
  std::string candidate;
  std::optional<std::string> out_file;
};

int CmdCompare(const CompareOptions& options, std::ostream& out,
               std::ostream& err);

struct ServeOptions {
  std::string config;
  std::optional<double> period;
  std::optional<std::string> state_file;
};

// Runs until `stop` becomes true (the tool wires it to SIGINT and SIGTERM),
// then writes the state snapshot. WAE_BIND_ADDRESS ("host" or "host:port"),
// WAE_PERIOD_SECONDS and WAE_LOG_LEVEL override the config.
int CmdServe(const ServeOptions& options, const std::atomic<bool>& stop,
             std::ostream& out, std::ostream& err);

// Parses argv and dispatches.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err, const std::atomic<bool>& stop);

}  // namespace cdnwae::cli

#endif  // CDNWAE_TOOLS_CLI_H_
