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

#include "leedw/service/api.hpp"

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::service {

namespace {

Json section_json(const reportgen::DraftSection& s) {
  Json j = s.to_json();
  j["revision_count"] = s.history.size();
  return j;
}

std::map<std::string, double> points_by_category(const Json& scorecard) {
  std::map<std::string, double> out;
  const Json credits = scorecard.value("credits", Json::object());
  for (const auto& [id, r] : credits.items()) {
    const auto q = store::as_quantity(r.value("awarded_points", Json()));
    out[id.substr(0, 2)] += q ? q->value : 0.0;
  }
  return out;
}

const Json& scorecard_of(const store::UnifiedStore& s) {
  const auto& res = s.results();
  if (!res.contains("credits") || !res["credits"].contains("scorecard")) {
    throw Error(ErrorCode::not_found, "no scorecard yet; run the pipeline first");
  }
  return res["credits"];
}

}  // namespace

Json create_project(RunManager& runs, const Json& descriptor, const std::filesystem::path& base_dir) {
  return {{"project_id", runs.workspace().create_project(descriptor, base_dir)}};
}

Json start_run(RunManager& runs, const std::string& project_id, RunScope scope,
               const std::optional<std::string>& scenario_id, bool background) {
  return runs.start({project_id, scope, scenario_id}, background).to_json();
}

Json apply_scenario(RunManager& runs, const std::string& project_id, const Json& body) {
  if (!body.is_object()) throw Error(ErrorCode::validation, "scenario body must be an object");
  std::vector<ScenarioChange> changes;
  try {
    for (const auto& c : body.value("changes", Json::array())) {
      changes.push_back({c.at("path").get<std::string>(), c.at("value")});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("malformed scenario change: ") + e.what());
  }
  const auto s = runs.workspace().create_scenario(project_id, body.value("name", std::string("scenario")), changes,
                                                  runs.graph());
  Json j = s.to_json();
  j["scenario_id"] = s.id;
  j.erase("id");
  return j;
}

Json get_scorecard(RunManager& runs, const std::string& project_id, const std::optional<std::string>& scenario_id) {
  const auto& ws = runs.workspace();
  const auto base = ws.load_store(project_id);
  Json out = {{"project_id", project_id}, {"scenario_id", scenario_id ? Json(*scenario_id) : Json()}};
  if (!scenario_id) {
    const Json& c = scorecard_of(base);
    out["scorecard"] = c["scorecard"];
    out["gaps"] = c.value("gaps", Json::array());
    return out;
  }
  const auto sc = ws.scenario_store(project_id, ws.load_scenario(project_id, *scenario_id));
  const Json& c = scorecard_of(sc);
  out["scorecard"] = c["scorecard"];
  out["gaps"] = c.value("gaps", Json::array());
  if (base.results().contains("credits") && base.results()["credits"].contains("scorecard")) {
    const auto before = points_by_category(base.results()["credits"]["scorecard"]);
    const auto after = points_by_category(c["scorecard"]);
    std::map<std::string, double> cats;
    for (const auto& [k, v] : after) cats[k] += v;
    for (const auto& [k, v] : before) cats[k] -= v;
    Json by = Json::object();
    double total = 0;
    for (const auto& [k, v] : cats) {
      by[k] = store::quantity(v, "1");
      total += v;
    }
    out["delta"] = {{"total_points", store::quantity(total, "1")}, {"by_category", by}};
  }
  return out;
}

Json get_report(RunManager& runs, const std::string& project_id) {
  const auto doc = runs.workspace().load_report(project_id);
  if (!doc) throw Error(ErrorCode::not_found, "no report yet for " + project_id);
  Json j = doc->to_json();
  j["markdown"] = reportgen::export_markdown(*doc);
  return j;
}

Json get_report_section(RunManager& runs, const std::string& project_id, const std::string& credit_id) {
  auto doc = runs.workspace().load_report(project_id);
  if (!doc) throw Error(ErrorCode::not_found, "no report yet for " + project_id);
  const auto* s = doc->section(credit_id);
  if (!s) throw Error(ErrorCode::not_found, "no report section for " + credit_id);
  return section_json(*s);
}

Json patch_report_section(RunManager& runs, const std::string& project_id, const std::string& credit_id,
                          const Json& body) {
  const auto& ws = runs.workspace();
  ws.require_project(project_id);
  if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
    throw Error(ErrorCode::validation, "patch body needs text", {"text: required text"});
  }
  ProjectLock lock(ws.project_dir(project_id));
  auto doc = ws.load_report(project_id);
  if (!doc) throw Error(ErrorCode::not_found, "no report yet for " + project_id);
  reportgen::patch_section(*doc, credit_id, body["text"].get<std::string>(), body.value("author", std::string("anonymous")),
                           iso8601_now());
  ws.save_report(project_id, *doc);
  return section_json(*doc->section(credit_id));
}

}  // namespace leedw::service
