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

#include "leedw/service/workspace.hpp"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cmath>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"
#include "leedw/datastore/path.hpp"

namespace leedw::service {

namespace fs = std::filesystem;

ProjectLock::ProjectLock(fs::path project_dir) : file_(std::move(project_dir) / ".lock") {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fd = ::open(file_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      const std::string pid = std::to_string(::getpid());
      [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
      ::close(fd);
      return;
    }
    if (errno != EEXIST) throw Error(ErrorCode::io, "cannot create lock " + file_.string());
    long owner = 0;
    try {
      owner = std::stol(read_file(file_));
    } catch (...) {
      owner = 0;
    }
    const bool alive = owner > 0 && (::kill(static_cast<pid_t>(owner), 0) == 0 || errno == EPERM);
    if (alive) break;
    std::error_code ec;
    fs::remove(file_, ec);
  }
  file_.clear();
  throw Error(ErrorCode::conflict, "project is locked by another run");
}

ProjectLock::~ProjectLock() {
  if (file_.empty()) return;
  std::error_code ec;
  fs::remove(file_, ec);
}

Json Scenario::to_json() const {
  Json ch = Json::array();
  for (const auto& c : changes) ch.push_back({{"path", c.path}, {"value", c.value}});
  return {{"id", id}, {"name", name}, {"changes", ch}, {"stale", stale}};
}

Scenario Scenario::from_json(const Json& j) {
  Scenario s;
  try {
    s.id = j.at("id").get<std::string>();
    s.name = j.value("name", s.id);
    for (const auto& c : j.at("changes")) s.changes.push_back({c.at("path").get<std::string>(), c.at("value")});
    for (const auto& t : j.value("stale", Json::array())) s.stale.insert(t.get<std::string>());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("malformed scenario: ") + e.what());
  }
  return s;
}

std::string slugify(const std::string& name) {
  std::string out;
  for (char c : to_lower(name)) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += c;
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

store::UnifiedStore apply_changes(const store::UnifiedStore& base, const std::vector<ScenarioChange>& changes) {
  std::vector<std::string> problems;
  store::UnifiedStore out = base;
  for (const auto& c : changes) {
    store::Path path;
    try {
      path = store::Path::parse(c.path);
    } catch (const Error& e) {
      problems.push_back(c.path + ": " + e.what());
      continue;
    }
    if (!path.within(store::Path::parse("$.inputs")) || path == store::Path::parse("$.inputs")) {
      problems.push_back(c.path + ": only paths under $.inputs can be changed");
      continue;
    }
    const Json* current = path.find(base.json());
    if (!current) {
      problems.push_back(c.path + ": no such input");
      continue;
    }
    Json value = c.value;
    if (store::is_quantity(*current) && (*current)["value"].is_number()) {
      const std::string unit = (*current)["unit"].get<std::string>();
      if (value.is_number()) value = store::quantity(value.get<double>(), unit);
      const auto q = store::as_quantity(value);
      if (!q) {
        problems.push_back(c.path + ": expected a quantity");
        continue;
      }
      if (!std::isfinite(q->value)) {
        problems.push_back(c.path + ": value must be finite");
        continue;
      }
      if (!units::compatible(q->unit, unit)) {
        problems.push_back(c.path + ": unit " + q->unit + " is incompatible with " + unit);
        continue;
      }
    }
    out = out.with_input(path, value);
  }
  if (!problems.empty()) throw Error(ErrorCode::validation, "invalid scenario change", problems);
  return out;
}

Workspace::Workspace(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

fs::path Workspace::project_dir(const std::string& id) const { return root_ / id; }

void Workspace::require_project(const std::string& id) const {
  if (id.empty() || id != slugify(id) || !fs::exists(project_dir(id) / "store.json")) {
    throw Error(ErrorCode::not_found, "unknown project " + id);
  }
}

std::vector<std::string> Workspace::project_ids() const {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(root_)) {
    if (e.is_directory() && fs::exists(e.path() / "store.json")) out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Workspace::create_project(const Json& d, const fs::path& base_dir) const {
  std::vector<std::string> problems;
  store::ProjectRecord p;
  if (!d.is_object()) throw Error(ErrorCode::validation, "project descriptor must be an object");
  if (!d.contains("name") || !d["name"].is_string() || trim(d["name"].get<std::string>()).empty()) {
    problems.push_back("name: required text");
  } else {
    p.name = trim(d["name"].get<std::string>());
    if (slugify(p.name).empty()) problems.push_back("name: needs at least one letter or digit");
  }
  if (!d.contains("floor_area_m2") || !d["floor_area_m2"].is_number()) {
    problems.push_back("floor_area_m2: required number");
  } else if (!(d["floor_area_m2"].get<double>() > 0)) {
    problems.push_back("floor_area_m2: must be > 0");
  } else {
    p.floor_area_m2 = d["floor_area_m2"].get<double>();
  }
  if (d.contains("stories")) {
    if (!d["stories"].is_number_integer() || d["stories"].get<int>() < 1) {
      problems.push_back("stories: must be an integer >= 1");
    } else {
      p.stories = d["stories"].get<int>();
    }
  }
  if (d.contains("rating_system")) {
    if (!d["rating_system"].is_string()) problems.push_back("rating_system: must be text");
    else p.rating_system = d["rating_system"].get<std::string>();
  }
  const Json loc = d.value("location", Json());
  if (!loc.is_object() || !loc.contains("lat") || !loc.contains("lon") || !loc["lat"].is_number() ||
      !loc["lon"].is_number()) {
    problems.push_back("location: requires numeric lat and lon");
  } else {
    p.location = {loc["lat"].get<double>(), loc["lon"].get<double>()};
    if (!p.location.valid()) problems.push_back("location: lat must be in [-90, 90] and lon in [-180, 180]");
  }
  Json inputs = d.value("inputs", Json::object());
  if (!inputs.is_object()) problems.push_back("inputs: must be an object");
  if (!problems.empty()) throw Error(ErrorCode::validation, "invalid project descriptor", problems);

  if (inputs.contains("documents")) {
    for (auto& doc : inputs["documents"]) {
      for (const char* key : {"path"}) {
        if (doc.contains(key) && doc[key].is_string() && !fs::path(doc[key].get<std::string>()).is_absolute()) {
          doc[key] = fs::absolute(base_dir / doc[key].get<std::string>()).lexically_normal().string();
        }
      }
      if (doc.contains("pages")) {
        for (auto& pg : doc["pages"]) {
          if (pg.is_string() && !fs::path(pg.get<std::string>()).is_absolute()) {
            pg = fs::absolute(base_dir / pg.get<std::string>()).lexically_normal().string();
          }
        }
      }
    }
  }

  p.id = slugify(p.name);
  for (const auto& id : project_ids()) {
    if (id == p.id || load_store(id).project().name == p.name) {
      throw Error(ErrorCode::conflict, "a project named '" + p.name + "' already exists", {id});
    }
  }
  const auto s = store::UnifiedStore::create(p, inputs);
  const auto violations = store::validate_store(s);
  if (!violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(v.path + ": " + v.message);
    throw Error(ErrorCode::validation, "invalid project inputs", details);
  }
  const fs::path dir = project_dir(p.id);
  if (!fs::create_directory(dir)) throw Error(ErrorCode::conflict, "project directory already exists", {dir.string()});
  for (const char* sub : {"runs", "scenarios", "reports"}) fs::create_directories(dir / sub);
  save_store(p.id, s);
  std::set<std::string> all;
  for (const auto& spec : orchestrator::default_pipeline_specs()) all.insert(spec.id);
  set_stale_tasks(p.id, all);
  return p.id;
}

store::UnifiedStore Workspace::load_store(const std::string& id) const {
  require_project(id);
  return store::load_file(project_dir(id) / "store.json");
}

void Workspace::save_store(const std::string& id, const store::UnifiedStore& s) const {
  store::persist(s, project_dir(id) / "store.json");
}

std::set<std::string> Workspace::stale_tasks(const std::string& id) const {
  require_project(id);
  const fs::path f = project_dir(id) / "state.json";
  if (!fs::exists(f)) return {};
  return Json::parse(read_file(f)).value("stale", std::set<std::string>{});
}

void Workspace::set_stale_tasks(const std::string& id, const std::set<std::string>& tasks) const {
  write_file_atomic(project_dir(id) / "state.json", Json{{"stale", tasks}}.dump(2) + "\n");
}

Scenario Workspace::create_scenario(const std::string& project_id, const std::string& name,
                                    const std::vector<ScenarioChange>& changes,
                                    const orchestrator::TaskGraph& graph) const {
  const auto base = load_store(project_id);
  apply_changes(base, changes);  // validation only
  Scenario s;
  s.name = name.empty() ? "scenario" : name;
  s.changes = changes;
  std::set<std::string> changed;
  for (const auto& c : changes) changed.insert(c.path);
  if (!changed.empty()) {
    s.stale = orchestrator::invalidate_downstream(graph, changed);
    for (const auto& t : stale_tasks(project_id)) {
      s.stale.insert(t);
      for (const auto& d : graph.descendants(t)) s.stale.insert(d);
    }
  }
  const fs::path dir = project_dir(project_id) / "scenarios";
  fs::create_directories(dir);
  const std::string stem = slugify(s.name).empty() ? "scenario" : slugify(s.name);
  s.id = stem;
  for (int n = 2; fs::exists(dir / s.id); ++n) s.id = stem + "-" + std::to_string(n);
  fs::create_directories(dir / s.id);
  save_scenario(project_id, s);
  return s;
}

Scenario Workspace::load_scenario(const std::string& project_id, const std::string& scenario_id) const {
  require_project(project_id);
  const fs::path f = project_dir(project_id) / "scenarios" / scenario_id / "scenario.json";
  if (scenario_id.empty() || scenario_id != slugify(scenario_id) || !fs::exists(f)) {
    throw Error(ErrorCode::not_found, "unknown scenario " + scenario_id);
  }
  return Scenario::from_json(Json::parse(read_file(f)));
}

void Workspace::save_scenario(const std::string& project_id, const Scenario& s) const {
  write_file_atomic(project_dir(project_id) / "scenarios" / s.id / "scenario.json", s.to_json().dump(2) + "\n");
}

store::UnifiedStore Workspace::scenario_store(const std::string& project_id, const Scenario& s) const {
  const fs::path f = project_dir(project_id) / "scenarios" / s.id / "store.json";
  if (fs::exists(f)) return store::load_file(f);
  return apply_changes(load_store(project_id), s.changes);
}

void Workspace::save_scenario_store(const std::string& project_id, const std::string& scenario_id,
                                    const store::UnifiedStore& s) const {
  store::persist(s, project_dir(project_id) / "scenarios" / scenario_id / "store.json");
}

fs::path Workspace::runs_dir(const std::string& project_id) const { return project_dir(project_id) / "runs"; }

std::string Workspace::next_run_id(const std::string& project_id) const {
  require_project(project_id);
  long highest = 0;
  const std::string prefix = project_id + ".r";
  if (fs::exists(runs_dir(project_id))) {
    for (const auto& e : fs::directory_iterator(runs_dir(project_id))) {
      const std::string name = e.path().filename().string();
      if (name.rfind(prefix, 0) != 0) continue;
      try {
        highest = std::max(highest, std::stol(name.substr(prefix.size())));
      } catch (...) {
      }
    }
  }
  return prefix + std::to_string(highest + 1);
}

std::pair<std::string, fs::path> Workspace::locate_run(const std::string& run_id) const {
  const size_t dot = run_id.rfind(".r");
  if (dot == std::string::npos || dot == 0) throw Error(ErrorCode::not_found, "unknown run " + run_id);
  const std::string project = run_id.substr(0, dot);
  if (project != slugify(project)) throw Error(ErrorCode::not_found, "unknown run " + run_id);
  const fs::path dir = runs_dir(project) / run_id;
  if (!fs::exists(dir)) throw Error(ErrorCode::not_found, "unknown run " + run_id);
  return {project, dir};
}

std::optional<reportgen::ReportDocument> Workspace::load_report(const std::string& project_id) const {
  require_project(project_id);
  const fs::path f = project_dir(project_id) / "reports" / "report.json";
  if (!fs::exists(f)) return std::nullopt;
  return reportgen::ReportDocument::from_json(Json::parse(read_file(f)));
}

void Workspace::save_report(const std::string& project_id, const reportgen::ReportDocument& doc) const {
  const fs::path dir = project_dir(project_id) / "reports";
  fs::create_directories(dir);
  write_file_atomic(dir / "report.json", doc.to_json().dump(2) + "\n");
  write_file_atomic(dir / "report.md", reportgen::export_markdown(doc));
}

}  // namespace leedw::service
