// Copyright (c) 2026 The leedw Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <string>
#include <thread>

#include "leedw/common/error.hpp"

#include "leedw/service/jobs.hpp"

namespace httplib {
class Server;
}

namespace leedw::service {

/// HTTP status for an error code.
int http_status(ErrorCode code);
/// {code, message, details}
Json error_body(const Error& e);

/// The JSON API over a RunManager. Routes:
///   POST  /projects
///   POST  /projects/{id}/runs            {scope?, scenario_id?}
///   GET   /runs/{id}                      job handle
///   GET   /runs/{id}/events               run log, streamed as NDJSON
///   POST  /projects/{id}/scenarios        {name, changes: [{path, value}]}
///   GET   /projects/{id}/scorecard        ?scenario=<id>
///   GET   /projects/{id}/report           full document
///   GET   /projects/{id}/report/sections/{credit_id}
///   PATCH /projects/{id}/report/sections/{credit_id}   {text, author}
///   GET   /healthz
class Service {
 public:
  explicit Service(std::shared_ptr<RunManager> runs);
  ~Service();

  /// Binds and serves on a background thread; returns the bound port
  /// (pass 0 for any free port).
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

  RunManager& runs() { return *runs_; }

 private:
  void routes();
  std::shared_ptr<RunManager> runs_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace leedw::service
