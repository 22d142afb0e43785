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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace leedw {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

/// UTC timestamp with millisecond precision, e.g. "2026-10-15T03:04:05.123Z".
std::string iso8601(std::chrono::system_clock::time_point tp);
std::string iso8601_now();

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames, so readers never observe
/// a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

}  // namespace leedw
