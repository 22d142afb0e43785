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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace leedw {

struct ProcessResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// True when `program` is an executable path, or resolves on PATH.
bool executable_available(const std::string& program);

/// Runs argv[0] with the given stdin and collects stdout/stderr. A program
/// that cannot be started raises Error(transient); a timeout kills the child
/// and also raises Error(transient). A zero timeout waits indefinitely.
ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input,
                          std::chrono::milliseconds timeout = std::chrono::milliseconds{0},
                          const std::filesystem::path& cwd = {});

}  // namespace leedw
