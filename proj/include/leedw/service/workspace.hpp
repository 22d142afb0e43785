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
#include <set>
#include <string>
#include <vector>

#include "leedw/datastore/store.hpp"
#include "leedw/orchestrator/graph.hpp"
#include "leedw/reportgen/report.hpp"

namespace leedw::service {

/// Single-writer lock: <project>/.lock holding the owner's pid. A lock left
/// by a dead process is taken over. Held -> Error(conflict).
class ProjectLock {
 public:
  explicit ProjectLock(std::filesystem::path project_dir);
  ~ProjectLock();
  ProjectLock(const ProjectLock&) = delete;
  ProjectLock& operator=(const ProjectLock&) = delete;

 private:
  std::filesystem::path file_;
};

struct ScenarioChange {
  std::string path;
  Json value;
};

struct Scenario {
  std::string id;
  std::string name;
  std::vector<ScenarioChange> changes;
  std::set<std::string> stale;

  Json to_json() const;
  static Scenario from_json(const Json& j);
};

/// Lowercase alphanumerics and dashes.
std::string slugify(const std::string& name);

/// On-disk layout: <root>/<project_id>/{store.json, state.json, runs/,
/// scenarios/, reports/}.
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path project_dir(const std::string& id) const;
  /// Throws Error(not_found).
  void require_project(const std::string& id) const;
  std::vector<std::string> project_ids() const;

  /// Descriptor: {name, floor_area_m2, location{lat, lon}, stories?,
  /// rating_system?, inputs?}. Relative document paths resolve against
  /// `base_dir`. Invalid fields -> Error(validation) naming each field;
  /// a name already in use -> Error(conflict).
  std::string create_project(const Json& descriptor, const std::filesystem::path& base_dir = {}) const;

  store::UnifiedStore load_store(const std::string& id) const;
  void save_store(const std::string& id, const store::UnifiedStore& s) const;

  /// Tasks whose results are out of date (all tasks for a new project).
  std::set<std::string> stale_tasks(const std::string& id) const;
  void set_stale_tasks(const std::string& id, const std::set<std::string>& tasks) const;

  /// Validates the changes against the base store, records the overlay and
  /// returns it with its stale set. The base store is not modified.
  Scenario create_scenario(const std::string& project_id, const std::string& name,
                           const std::vector<ScenarioChange>& changes, const orchestrator::TaskGraph& graph) const;
  Scenario load_scenario(const std::string& project_id, const std::string& scenario_id) const;
  void save_scenario(const std::string& project_id, const Scenario& s) const;
  /// The scenario's last run output, else the base store with the changes applied.
  store::UnifiedStore scenario_store(const std::string& project_id, const Scenario& s) const;
  void save_scenario_store(const std::string& project_id, const std::string& scenario_id,
                           const store::UnifiedStore& s) const;

  std::filesystem::path runs_dir(const std::string& project_id) const;
  /// "<project>.r<n>" with n one past the highest existing run.
  std::string next_run_id(const std::string& project_id) const;
  /// Splits a run id; unknown run -> Error(not_found).
  std::pair<std::string, std::filesystem::path> locate_run(const std::string& run_id) const;

  std::optional<reportgen::ReportDocument> load_report(const std::string& project_id) const;
  /// Writes reports/report.json and reports/report.md.
  void save_report(const std::string& project_id, const reportgen::ReportDocument& doc) const;

 private:
  std::filesystem::path root_;
};

/// Applies scenario changes to a store's inputs. Paths must lie under
/// $.inputs and already exist; quantities must keep a compatible unit.
store::UnifiedStore apply_changes(const store::UnifiedStore& base, const std::vector<ScenarioChange>& changes);

}  // namespace leedw::service
