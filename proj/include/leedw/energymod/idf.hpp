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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leedw/energymod/model.hpp"

namespace leedw::energymod {

/// Field values are kept as text so a parsed document re-emits verbatim.
struct IdfObject {
  std::string cls;
  std::vector<std::string> fields;

  /// First field for every class in the supported subset except Version.
  std::string name() const;
  std::optional<double> number(size_t i) const;
  bool operator==(const IdfObject&) const = default;
};

struct IdfDocument {
  std::vector<IdfObject> objects;

  std::vector<const IdfObject*> of_class(std::string_view cls) const;
  const IdfObject* find(std::string_view cls, std::string_view name) const;
  bool operator==(const IdfDocument&) const = default;
};

/// Field labels used in "!-" comments; empty for unknown classes.
const std::vector<std::string>& field_names(std::string_view cls);

/// Objects ordered by class rank, then name. Throws Error(validation) when
/// the model has no zones, Error(missing_input) without an occupancy schedule.
IdfDocument emit_idf(const BuildingModel& model);
std::string serialize_idf(const IdfDocument& doc);
/// Throws Error(parse) on an unterminated object.
IdfDocument parse_idf(std::string_view text);

enum class FindingKind { physical, reference, duplicate, numeric, structure };

std::string_view to_string(FindingKind k);

struct Finding {
  FindingKind kind = FindingKind::physical;
  std::string cls;
  std::string object;
  std::string message;
};

/// Empty iff the document is simulation-ready.
std::vector<Finding> validate_idf(const IdfDocument& doc);

}  // namespace leedw::energymod
