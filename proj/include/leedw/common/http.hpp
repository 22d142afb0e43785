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

#include <chrono>
#include <string>

namespace leedw::http {

struct Response {
  int status = 0;
  std::string body;
};

/// Connection failures and timeouts raise Error(transient). Any HTTP status
/// is returned to the caller, which decides how to classify it.
Response post_json(const std::string& url, const std::string& body,
                   std::chrono::milliseconds timeout = std::chrono::seconds{30});
Response get(const std::string& url, std::chrono::milliseconds timeout = std::chrono::seconds{30});

/// "http://host:8080/v1/x?y=1" -> {"http://host:8080", "/v1/x?y=1"}.
std::pair<std::string, std::string> split_url(const std::string& url);

}  // namespace leedw::http
