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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "leedw/common/units.hpp"
#include "leedw/datastore/path.hpp"

namespace leedw {

using Json = nlohmann::json;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  bool valid() const;
  bool operator==(const GeoPoint&) const = default;
};

}  // namespace leedw

namespace leedw::store {

inline constexpr int kSchemaVersion = 1;

/// {"value": v, "unit": u}, the on-disk shape of every numeric leaf.
Json quantity(double value, std::string unit);
Json quantity(const Quantity& q);
bool is_quantity(const Json& node);
/// Reads a scalar quantity node; nullopt when the node is not one.
std::optional<Quantity> as_quantity(const Json& node);

struct ProjectRecord {
  std::string id;
  std::string name;
  std::string rating_system = "LEED v4 BD+C";
  double floor_area_m2 = 0.0;
  int stories = 1;
  GeoPoint location;

  Json to_json() const;
  /// Throws Error(validation) with one detail per offending field.
  static ProjectRecord from_json(const Json& j);
};

enum class EvidenceSource { document, simulation, geo, user_input };

std::string_view to_string(EvidenceSource s);

struct EvidenceRef {
  EvidenceSource source = EvidenceSource::user_input;
  std::string locator;  // a store path, or "<document-id>#<region-id>"
  double confidence = 1.0;

  Json to_json() const;
  static EvidenceRef from_json(const Json& j);
};

struct Violation {
  std::string path;
  std::string message;
};

/// Who produced a results subtree.
struct Stamp {
  std::string task_id;
  std::string timestamp;
};

/// Immutable snapshot of a project's inputs, results and provenance.
class UnifiedStore {
 public:
  UnifiedStore();
  static UnifiedStore create(const ProjectRecord& project, Json inputs = Json::object());
  /// Wraps a document without validating it; see validate_store().
  static UnifiedStore from_json(Json doc);

  const Json& json() const { return doc_; }
  ProjectRecord project() const { return ProjectRecord::from_json(doc_.at("project")); }
  const Json& inputs() const { return doc_.at("inputs"); }
  const Json& results() const { return doc_.at("results"); }
  const Json& provenance() const { return doc_.at("provenance"); }

  /// Returns a copy with `value` written at `path`, which must lie under $.inputs.
  UnifiedStore with_input(const Path& path, Json value) const;

  bool operator==(const UnifiedStore& o) const { return doc_ == o.doc_; }

 private:
  explicit UnifiedStore(Json doc) : doc_(std::move(doc)) {}
  Json doc_;
};

std::vector<Violation> validate_store(const UnifiedStore& store);

/// Store-path locators must resolve in the store; document locators must
/// name an entry of $.inputs.documents.
bool resolves(const EvidenceRef& ref, const UnifiedStore& store);

/// Folds `delta` (a results tree keyed by module name) into a copy of
/// `store`. Every key under delta[module] gets a provenance stamp. Throws
/// Error(conflict) when delta touches another module's subtree.
UnifiedStore merge_module_results(const UnifiedStore& store, std::string_view module,
                                  const Json& delta, const Stamp& stamp);

struct QueryResult {
  Json value;
  std::optional<Quantity> quantity;
};

/// Not-found is an empty optional; malformed paths throw.
std::optional<QueryResult> query_path(const UnifiedStore& store, std::string_view path);

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string persist(const UnifiedStore& store);
void persist(const UnifiedStore& store, const std::filesystem::path& destination);
UnifiedStore load(std::string_view bytes);
UnifiedStore load_file(const std::filesystem::path& source);

/// Hash of the canonical serialization with provenance timestamps blanked,
/// so two runs that produce the same data hash equal.
std::string content_hash(const UnifiedStore& store);

}  // namespace leedw::store
