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

#include "leedw/common/http.hpp"

#include <httplib.h>

#include "leedw/common/error.hpp"

namespace leedw::http {

namespace {

httplib::Client make_client(const std::string& origin, std::chrono::milliseconds timeout) {
  httplib::Client cli(origin);
  const auto secs = static_cast<time_t>(timeout.count() / 1000);
  const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  return cli;
}

Response unwrap(const httplib::Result& res, const std::string& url) {
  if (!res) {
    throw Error(ErrorCode::transient,
                "request to " + url + " failed: " + httplib::to_string(res.error()));
  }
  return Response{res->status, res->body};
}

}  // namespace

std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::configuration, "bad URL '" + url + "'");
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

Response post_json(const std::string& url, const std::string& body,
                   std::chrono::milliseconds timeout) {
  auto [origin, path] = split_url(url);
  auto cli = make_client(origin, timeout);
  return unwrap(cli.Post(path, body, "application/json"), url);
}

Response get(const std::string& url, std::chrono::milliseconds timeout) {
  auto [origin, path] = split_url(url);
  auto cli = make_client(origin, timeout);
  return unwrap(cli.Get(path), url);
}

}  // namespace leedw::http
