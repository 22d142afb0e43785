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

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace leedw::store {

/// A parsed store path in dot/bracket form: "$.inputs.building.envelope[0].u_value".
class Path {
 public:
  using Segment = std::variant<std::string, std::size_t>;

  Path() = default;
  /// Throws Error(malformed_path).
  static Path parse(std::string_view text);

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::string str() const;

  Path child(std::string key) const;
  Path index(std::size_t i) const;

  /// True when this path equals `other` or lies underneath it.
  bool within(const Path& other) const;
  /// True when either path lies within the other.
  bool overlaps(const Path& other) const { return within(other) || other.within(*this); }

  const nlohmann::json* find(const nlohmann::json& root) const;
  /// Creates intermediate objects as needed. Array segments must exist.
  nlohmann::json& ensure(nlohmann::json& root) const;

  bool operator==(const Path&) const = default;
  auto operator<=>(const Path& o) const { return str() <=> o.str(); }

 private:
  std::vector<Segment> segments_;
};

}  // namespace leedw::store
