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

#include "http_server.h"

#include <httplib.h>
#include <spdlog/spdlog.h>
#include <sys/socket.h>

#include <string>
#include <thread>

#include "cdnwae/codec.h"
#include "cdnwae/error.h"

namespace cdnwae {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownMachine: return 404;
    case ErrorCode::kIncompleteSnapshot: return 409;
    default: return 400;
  }
}

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void ReplyError(httplib::Response& res, const Error& e) {
  Reply(res, StatusFor(e.code()),
        {{"error", ErrorCodeName(e.code())}, {"message", e.what()}});
}

}  // namespace

struct HttpFrontend::Impl {
  explicit Impl(WaeService& s) : service(s) {}

  WaeService& service;
  httplib::Server server;
  std::thread thread;
  int port = -1;
};

HttpFrontend::HttpFrontend(WaeService& service)
    : impl_(std::make_unique<Impl>(service)) {
  httplib::Server& server = impl_->server;
  WaeService& wae = impl_->service;

  // SO_REUSEADDR only: the library default adds SO_REUSEPORT, which would let
  // a second instance share a port that is already serving.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  server.Post("/v1/telemetry", [&wae](const httplib::Request& req,
                                      httplib::Response& res) {
    try {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kMalformedPayload, std::string("$: ") + e.what());
      }
      const TelemetryPayload payload = TelemetryFromJson(body);
      wae.Ingest(payload.telemetry, payload.requests);
      spdlog::debug("telemetry machine={} period={}",
                    payload.telemetry.machine.index,
                    payload.telemetry.period_id);
      Reply(res, 200,
            {{"status", "accepted"},
             {"machine", payload.telemetry.machine.index},
             {"period", payload.telemetry.period_id}});
    } catch (const Error& e) {
      spdlog::warn("rejected telemetry: {}", e.what());
      ReplyError(res, e);
    }
  });

  server.Get(R"(/v1/assignments/(\d+))", [&wae](const httplib::Request& req,
                                                httplib::Response& res) {
    try {
      const std::size_t machine = std::stoul(req.matches[1].str());
      if (machine >= wae.machine_count()) {
        throw Error(ErrorCode::kUnknownMachine,
                    "machine " + std::to_string(machine) +
                        " is not part of this PoP");
      }
      // One copy of the state keeps round and commands consistent.
      const ServiceState state = wae.State();
      json commands = json::array();
      for (const AssignmentCommand& c : state.commands[machine]) {
        commands.push_back(CommandToJson(c));
      }
      Reply(res, 200,
            {{"version", kFormatVersion},
             {"machine", machine},
             {"round", state.round},
             {"period", state.last_period ? json(*state.last_period)
                                          : json(nullptr)},
             {"commands", commands}});
    } catch (const Error& e) {
      ReplyError(res, e);
    } catch (const std::out_of_range&) {
      ReplyError(res, Error(ErrorCode::kUnknownMachine, "machine id too large"));
    }
  });

  server.Post("/v1/rounds", [&wae](const httplib::Request& req,
                                   httplib::Response& res) {
    try {
      if (!req.has_param("period")) {
        throw Error(ErrorCode::kMalformedPayload, "missing query parameter 'period'");
      }
      std::int64_t period = 0;
      try {
        period = std::stoll(req.get_param_value("period"));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kMalformedPayload, "period must be an integer");
      }
      const RoundSummary summary = wae.RunRound(period);
      if (summary.skipped) spdlog::warn("round skipped: {}", summary.message);
      Reply(res, summary.skipped ? StatusFor(*summary.skip_reason) : 200,
            RoundSummaryToJson(summary));
    } catch (const Error& e) {
      ReplyError(res, e);
    }
  });

  server.Get("/v1/status", [&wae](const httplib::Request&,
                                  httplib::Response& res) {
    const ServiceState state = wae.State();
    const auto last = wae.LastRound();
    Reply(res, 200,
          {{"version", kFormatVersion},
           {"status", "ok"},
           {"machines", wae.machine_count()},
           {"period_seconds", wae.config().period_seconds},
           {"round", state.round},
           {"last_round", last ? RoundSummaryToJson(*last) : json(nullptr)},
           {"pending_periods", wae.PendingPeriods()},
           {"assignment", MatrixToJson(RunningMatrix(state.records))},
           {"free_addresses", state.pool.free_count()}});
  });
}

HttpFrontend::~HttpFrontend() { Stop(); }

void HttpFrontend::Bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    impl_->port = port;
  } else {
    impl_->port = -1;
  }
  if (impl_->port <= 0) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" +
                                         std::to_string(port));
  }
}

int HttpFrontend::port() const { return impl_->port; }

void HttpFrontend::Start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpFrontend::Stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

}  // namespace cdnwae
