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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leedw {

/// Error categories shared by every module. The orchestrator retries only
/// `transient`; everything else is treated as permanent.
enum class ErrorCode {
  validation,
  not_found,
  conflict,
  malformed_path,
  unsupported_version,
  io,
  parse,
  configuration,
  evaluation,
  parameter,
  unsupported_input,
  missing_input,
  transient,
  protocol,
  permanent,
  usage,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> details = {})
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }
  bool transient() const noexcept { return code_ == ErrorCode::transient; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace leedw
