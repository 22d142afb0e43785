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

#include "leedw/service/server.hpp"

#include <httplib.h>

#include "leedw/common/error.hpp"
#include "leedw/service/api.hpp"

namespace leedw::service {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation:
    case ErrorCode::malformed_path:
    case ErrorCode::parse:
    case ErrorCode::parameter:
    case ErrorCode::usage:
    case ErrorCode::unsupported_input:
    case ErrorCode::unsupported_version:
      return 400;
    case ErrorCode::not_found: return 404;
    case ErrorCode::conflict: return 409;
    case ErrorCode::missing_input:
    case ErrorCode::evaluation:
      return 422;
    case ErrorCode::transient: return 503;
    default: return 500;
  }
}

Json error_body(const Error& e) {
  return {{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"details", e.details()}};
}

namespace {

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

Json body_of(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("request body is not JSON: ") + e.what());
  }
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send(res, http_status(e.code()), error_body(e));
    } catch (const std::exception& e) {
      send(res, 500, error_body(Error(ErrorCode::permanent, e.what())));
    }
  };
}

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

}  // namespace

Service::Service(std::shared_ptr<RunManager> runs) : runs_(std::move(runs)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

Service::~Service() { stop(); }

void Service::routes() {
  auto& s = *server_;
  RunManager& rm = *runs_;

  s.Get("/healthz", guarded([](const httplib::Request&, httplib::Response& res) { send(res, 200, {{"status", "ok"}}); }));

  s.Post("/projects", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    send(res, 201, create_project(rm, body_of(req), std::filesystem::current_path()));
  }));

  s.Post(R"(/projects/([^/]+)/runs)", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    const Json b = body_of(req);
    std::optional<std::string> scenario;
    if (b.contains("scenario_id") && b["scenario_id"].is_string()) scenario = b["scenario_id"].get<std::string>();
    send(res, 202, start_run(rm, req.matches[1], parse_scope(b.value("scope", std::string("full"))), scenario, true));
  }));

  s.Get(R"(/runs/([^/]+))", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, rm.get(req.matches[1]).to_json());
  }));

  s.Get(R"(/runs/([^/]+)/events)", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    const std::string run_id = req.matches[1];
    rm.get(run_id);  // not-found before streaming starts
    auto offset = std::make_shared<size_t>(0);
    res.set_chunked_content_provider("application/x-ndjson", [&rm, run_id, offset](size_t, httplib::DataSink& sink) {
      for (;;) {
        bool terminal = false;
        const auto lines = rm.events(run_id, *offset, terminal);
        for (const auto& l : lines) {
          const std::string out = l + "\n";
          if (!sink.write(out.data(), out.size())) return false;
        }
        *offset += lines.size();
        if (terminal) {
          sink.done();
          return true;
        }
        if (!sink.is_writable()) return false;
        rm.wait_for_events(run_id, *offset, std::chrono::milliseconds(200));
      }
    });
  }));

  s.Post(R"(/projects/([^/]+)/scenarios)", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    send(res, 201, apply_scenario(rm, req.matches[1], body_of(req)));
  }));

  s.Get(R"(/projects/([^/]+)/scorecard)", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, get_scorecard(rm, req.matches[1], param(req, "scenario")));
  }));

  s.Get(R"(/projects/([^/]+)/report)", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, get_report(rm, req.matches[1]));
  }));

  s.Get(R"(/projects/([^/]+)/report/sections/([^/]+))", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, get_report_section(rm, req.matches[1], req.matches[2]));
  }));

  s.Patch(R"(/projects/([^/]+)/report/sections/([^/]+))", guarded([&rm](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, patch_report_section(rm, req.matches[1], req.matches[2], body_of(req)));
  }));
}

int Service::start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void Service::listen(const std::string& host, int port) {
  if (!server_->listen(host, port)) throw Error(ErrorCode::io, "cannot listen on " + host + ":" + std::to_string(port));
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace leedw::service
