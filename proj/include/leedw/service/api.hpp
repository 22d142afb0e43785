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

#include "leedw/service/jobs.hpp"

namespace leedw::service {

// Operations shared by the HTTP routes and the CLI.

/// {project_id}
Json create_project(RunManager& runs, const Json& descriptor, const std::filesystem::path& base_dir = {});

/// Job handle JSON.
Json start_run(RunManager& runs, const std::string& project_id, RunScope scope,
               const std::optional<std::string>& scenario_id, bool background);

/// {scenario_id, name, changes, stale}. Body: {name, changes: [{path, value}]}.
Json apply_scenario(RunManager& runs, const std::string& project_id, const Json& body);

/// {project_id, scenario_id, scorecard, gaps, delta?}; delta compares a
/// scenario's points with the base project, per category and in total.
/// No scorecard yet -> Error(not_found).
Json get_scorecard(RunManager& runs, const std::string& project_id, const std::optional<std::string>& scenario_id);

/// {status, sections, appendix, markdown}; no report -> Error(not_found).
Json get_report(RunManager& runs, const std::string& project_id);
/// Section JSON plus revision_count.
Json get_report_section(RunManager& runs, const std::string& project_id, const std::string& credit_id);
/// Body: {text, author?}. Holds the project lock while writing.
Json patch_report_section(RunManager& runs, const std::string& project_id, const std::string& credit_id,
                          const Json& body);

}  // namespace leedw::service
