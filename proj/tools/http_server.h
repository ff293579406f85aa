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

// HTTP transport for WaeService:
//
//   POST /v1/telemetry               ingest one machine's period report
//   GET  /v1/assignments/<machine>   commands of the latest round
//   POST /v1/rounds?period=<p>       run the round for period p now
//   GET  /v1/status                  health and round summary
//
// Request and response bodies are JSON; see docs/formats.md.

#ifndef CDNWAE_TOOLS_HTTP_SERVER_H_
#define CDNWAE_TOOLS_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "cdnwae/service.h"

namespace cdnwae {

class HttpFrontend {
 public:
  explicit HttpFrontend(WaeService& service);
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Port 0 picks a free port. Throws Error(kIoError) when binding fails.
  void Bind(const std::string& host, int port);
  int port() const;

  // Serves on a background thread until Stop().
  void Start();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cdnwae

#endif  // CDNWAE_TOOLS_HTTP_SERVER_H_
