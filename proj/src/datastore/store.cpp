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

#include "leedw/datastore/store.hpp"

#include <cmath>
#include <set>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw {

bool GeoPoint::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

}  // namespace leedw

namespace leedw::store {

namespace {

const std::set<std::string> kTopLevelKeys = {"schema_version", "project", "inputs", "results",
                                             "provenance"};

bool finite_number(const Json& j) { return j.is_number() && std::isfinite(j.get<double>()); }

void deep_merge(Json& target, const Json& patch) {
  if (!target.is_object() || !patch.is_object()) {
    target = patch;
    return;
  }
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    deep_merge(target[it.key()], it.value());
  }
}

void check_units(const Json& node, const Path& at, std::vector<Violation>& out) {
  if (node.is_number()) {
    out.push_back({at.str(), "numeric value without unit tag"});
    return;
  }
  if (node.is_object()) {
    if (node.contains("value") && node.contains("unit")) {
      if (!is_quantity(node)) {
        out.push_back({at.str(), "malformed quantity (needs finite value and nonempty unit)"});
      }
      return;
    }
    for (auto it = node.begin(); it != node.end(); ++it) check_units(it.value(), at.child(it.key()), out);
    return;
  }
  if (node.is_array()) {
    for (size_t i = 0; i < node.size(); ++i) check_units(node[i], at.index(i), out);
  }
}

std::optional<double> quantity_in(const Json& node, std::string_view unit) {
  auto q = as_quantity(node);
  if (!q || !units::compatible(q->unit, unit)) return std::nullopt;
  return units::convert(q->value, q->unit, unit);
}

}  // namespace

Json quantity(double value, std::string unit) {
  return Json{{"value", value}, {"unit", std::move(unit)}};
}

Json quantity(const Quantity& q) { return quantity(q.value, q.unit); }

bool is_quantity(const Json& node) {
  if (!node.is_object() || node.size() != 2) return false;
  auto v = node.find("value");
  auto u = node.find("unit");
  if (v == node.end() || u == node.end()) return false;
  if (!u->is_string() || u->get_ref<const std::string&>().empty()) return false;
  if (finite_number(*v)) return true;
  if (!v->is_array()) return false;
  for (const auto& e : *v) {
    if (!finite_number(e)) return false;
  }
  return true;
}

std::optional<Quantity> as_quantity(const Json& node) {
  if (!is_quantity(node) || !node["value"].is_number()) return std::nullopt;
  return Quantity{node["value"].get<double>(), node["unit"].get<std::string>()};
}

Json ProjectRecord::to_json() const {
  return Json{{"id", id},
              {"name", name},
              {"rating_system", rating_system},
              {"floor_area", quantity(floor_area_m2, "m2")},
              {"stories", quantity(stories, "1")},
              {"location", {{"lat", quantity(location.lat, "deg")}, {"lon", quantity(location.lon, "deg")}}}};
}

ProjectRecord ProjectRecord::from_json(const Json& j) {
  std::vector<std::string> problems;
  ProjectRecord p;
  auto text = [&](const char* key, std::string& dst, bool required) {
    if (j.contains(key) && j[key].is_string() && !j[key].get<std::string>().empty()) {
      dst = j[key].get<std::string>();
    } else if (required || j.contains(key)) {
      problems.push_back(std::string(key) + ": expected nonempty text");
    }
  };
  if (!j.is_object()) throw Error(ErrorCode::validation, "project must be an object", {"project"});
  text("id", p.id, false);
  text("name", p.name, true);
  text("rating_system", p.rating_system, false);

  if (auto area = j.contains("floor_area") ? quantity_in(j["floor_area"], "m2") : std::nullopt) {
    p.floor_area_m2 = *area;
    if (!(p.floor_area_m2 > 0)) problems.push_back("floor_area: must be > 0");
  } else {
    problems.push_back("floor_area: expected an area quantity");
  }
  if (auto st = j.contains("stories") ? quantity_in(j["stories"], "1") : std::nullopt) {
    if (*st < 1 || std::floor(*st) != *st) {
      problems.push_back("stories: must be an integer >= 1");
    } else {
      p.stories = static_cast<int>(*st);
    }
  } else {
    problems.push_back("stories: expected a count quantity");
  }
  const Json* loc = j.contains("location") ? &j["location"] : nullptr;
  auto lat = loc && loc->contains("lat") ? quantity_in((*loc)["lat"], "deg") : std::nullopt;
  auto lon = loc && loc->contains("lon") ? quantity_in((*loc)["lon"], "deg") : std::nullopt;
  if (lat && lon) {
    p.location = {*lat, *lon};
    if (!p.location.valid()) problems.push_back("location: lat/lon out of range");
  } else {
    problems.push_back("location: expected lat and lon in degrees");
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::validation, "invalid project record", std::move(problems));
  }
  return p;
}

std::string_view to_string(EvidenceSource s) {
  switch (s) {
    case EvidenceSource::document: return "document";
    case EvidenceSource::simulation: return "simulation";
    case EvidenceSource::geo: return "geo";
    case EvidenceSource::user_input: return "user_input";
  }
  return "user_input";
}

Json EvidenceRef::to_json() const {
  return Json{{"source", to_string(source)}, {"locator", locator}, {"confidence", quantity(confidence, "1")}};
}

EvidenceRef EvidenceRef::from_json(const Json& j) {
  EvidenceRef r;
  const auto src = j.at("source").get<std::string>();
  if (src == "document") r.source = EvidenceSource::document;
  else if (src == "simulation") r.source = EvidenceSource::simulation;
  else if (src == "geo") r.source = EvidenceSource::geo;
  else if (src == "user_input") r.source = EvidenceSource::user_input;
  else throw Error(ErrorCode::validation, "unknown evidence source '" + src + "'");
  r.locator = j.at("locator").get<std::string>();
  r.confidence = as_quantity(j.at("confidence")).value_or(Quantity{0.0, "1"}).value;
  return r;
}

UnifiedStore::UnifiedStore()
    : doc_(Json{{"schema_version", kSchemaVersion},
                {"project", Json::object()},
                {"inputs", Json::object()},
                {"results", Json::object()},
                {"provenance", Json::object()}}) {}

UnifiedStore UnifiedStore::create(const ProjectRecord& project, Json inputs) {
  UnifiedStore s;
  s.doc_["project"] = project.to_json();
  s.doc_["inputs"] = inputs.is_null() ? Json::object() : std::move(inputs);
  return s;
}

UnifiedStore UnifiedStore::from_json(Json doc) { return UnifiedStore(std::move(doc)); }

UnifiedStore UnifiedStore::with_input(const Path& path, Json value) const {
  if (path.segments().empty() || path.segments()[0] != Path::Segment{std::string("inputs")}) {
    throw Error(ErrorCode::validation, "only paths under $.inputs may be edited: " + path.str());
  }
  Json doc = doc_;
  path.ensure(doc) = std::move(value);
  return UnifiedStore(std::move(doc));
}

std::vector<Violation> validate_store(const UnifiedStore& store) {
  std::vector<Violation> out;
  const Json& doc = store.json();
  if (!doc.is_object()) {
    out.push_back({"$", "store must be an object"});
    return out;
  }
  if (!doc.contains("schema_version")) {
    out.push_back({"$.schema_version", "missing schema_version"});
  } else if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() < 1) {
    out.push_back({"$.schema_version", "schema_version must be a positive integer"});
  } else if (doc["schema_version"].get<int>() != kSchemaVersion) {
    out.push_back({"$.schema_version", "unsupported schema_version"});
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!kTopLevelKeys.count(it.key())) out.push_back({"$." + it.key(), "unknown top-level key"});
  }

  if (!doc.contains("project")) {
    out.push_back({"$.project", "missing project record"});
  } else {
    try {
      ProjectRecord::from_json(doc["project"]);
    } catch (const Error& e) {
      for (const auto& d : e.details()) {
        out.push_back({"$.project." + d.substr(0, d.find(':')), d});
      }
      if (e.details().empty()) out.push_back({"$.project", e.what()});
    }
    check_units(doc["project"], Path::parse("$.project"), out);
  }

  for (const char* key : {"inputs", "results", "provenance"}) {
    if (!doc.contains(key) || !doc[key].is_object()) {
      out.push_back({std::string("$.") + key, "missing or not an object"});
    }
  }
  if (doc.contains("inputs")) check_units(doc["inputs"], Path::parse("$.inputs"), out);

  const Json empty = Json::object();
  const Json& prov = doc.contains("provenance") && doc["provenance"].is_object() ? doc["provenance"] : empty;
  if (doc.contains("results") && doc["results"].is_object()) {
    const Json& results = doc["results"];
    check_units(results, Path::parse("$.results"), out);
    for (auto m = results.begin(); m != results.end(); ++m) {
      const std::string module_path = "$.results." + m.key();
      if (!m->is_object()) {
        out.push_back({module_path, "module results must be an object"});
        continue;
      }
      for (auto e = m->begin(); e != m->end(); ++e) {
        const std::string entry_path = module_path + "." + e.key();
        if (!prov.contains(entry_path) && !prov.contains(module_path)) {
          out.push_back({entry_path, "results entry has no provenance record"});
        }
      }
    }
  }
  for (auto p = prov.begin(); p != prov.end(); ++p) {
    const Json& rec = p.value();
    if (!rec.is_object() || !rec.contains("task") || !rec["task"].is_string() ||
        !rec.contains("timestamp") || !rec["timestamp"].is_string()) {
      out.push_back({"$.provenance[\"" + p.key() + "\"]", "provenance needs task and timestamp"});
      continue;
    }
    try {
      if (!Path::parse(p.key()).find(doc)) {
        out.push_back({p.key(), "provenance record for a path that does not exist"});
      }
    } catch (const Error&) {
      out.push_back({p.key(), "provenance key is not a valid path"});
    }
  }
  return out;
}

bool resolves(const EvidenceRef& ref, const UnifiedStore& store) {
  if (!ref.locator.empty() && ref.locator[0] == '$') {
    try {
      return query_path(store, ref.locator).has_value();
    } catch (const Error&) {
      return false;
    }
  }
  const std::string doc_id = ref.locator.substr(0, ref.locator.find('#'));
  const Json& inputs = store.inputs();
  if (!inputs.contains("documents") || !inputs["documents"].is_array()) return false;
  for (const auto& d : inputs["documents"]) {
    if (d.value("id", "") == doc_id) return true;
  }
  return false;
}

UnifiedStore merge_module_results(const UnifiedStore& store, std::string_view module,
                                  const Json& delta, const Stamp& stamp) {
  if (delta.is_null() || (delta.is_object() && delta.empty())) return store;
  if (!delta.is_object()) throw Error(ErrorCode::validation, "results delta must be an object");
  for (auto it = delta.begin(); it != delta.end(); ++it) {
    if (it.key() != module) {
      throw Error(ErrorCode::conflict, "module '" + std::string(module) + "' cannot write $.results." +
                                           it.key() + ", which is owned by module '" + it.key() + "'");
    }
  }
  const Json& mine = delta.at(std::string(module));
  if (!mine.is_object()) throw Error(ErrorCode::validation, "module results must be an object");
  if (mine.empty()) return store;

  Json doc = store.json();
  deep_merge(doc["results"][std::string(module)], mine);
  for (auto it = mine.begin(); it != mine.end(); ++it) {
    const std::string path = "$.results." + std::string(module) + "." + it.key();
    doc["provenance"][path] = Json{{"task", stamp.task_id}, {"timestamp", stamp.timestamp}};
  }
  return UnifiedStore::from_json(std::move(doc));
}

std::optional<QueryResult> query_path(const UnifiedStore& store, std::string_view path) {
  const Path p = Path::parse(path);
  const Json* node = p.find(store.json());
  if (!node) return std::nullopt;
  return QueryResult{*node, as_quantity(*node)};
}

std::string persist(const UnifiedStore& store) {
  auto violations = validate_store(store);
  if (!violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(v.path + ": " + v.message);
    throw Error(ErrorCode::validation, "refusing to persist an invalid store", std::move(details));
  }
  return store.json().dump(2) + "\n";
}

void persist(const UnifiedStore& store, const std::filesystem::path& destination) {
  write_file_atomic(destination, persist(store));
}

UnifiedStore load(std::string_view bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("store is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version") || !doc["schema_version"].is_number_integer()) {
    throw Error(ErrorCode::validation, "store lacks an integer schema_version");
  }
  const int version = doc["schema_version"].get<int>();
  if (version != kSchemaVersion) {
    throw Error(ErrorCode::unsupported_version,
                "unsupported schema_version " + std::to_string(version) + " (supported: " +
                    std::to_string(kSchemaVersion) + ")");
  }
  for (const char* key : {"inputs", "results", "provenance"}) {
    if (!doc.contains(key)) doc[key] = Json::object();
  }
  return UnifiedStore::from_json(std::move(doc));
}

UnifiedStore load_file(const std::filesystem::path& source) { return load(read_file(source)); }

std::string content_hash(const UnifiedStore& store) {
  Json doc = store.json();
  if (doc.contains("provenance")) {
    for (auto& rec : doc["provenance"]) {
      if (rec.is_object()) rec.erase("timestamp");
    }
  }
  return hex64(fnv1a64(doc.dump()));
}

}  // namespace leedw::store
