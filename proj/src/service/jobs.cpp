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

#include "leedw/service/jobs.hpp"

#include <fstream>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"
#include "leedw/service/pipeline.hpp"

namespace leedw::service {

namespace fs = std::filesystem;
using orchestrator::TaskStatus;

namespace {

TaskStatus parse_task_status(const std::string& s) {
  for (auto st : {TaskStatus::pending, TaskStatus::running, TaskStatus::completed, TaskStatus::failed,
                  TaskStatus::skipped, TaskStatus::stale}) {
    if (orchestrator::to_string(st) == s) return st;
  }
  throw Error(ErrorCode::validation, "unknown task status " + s);
}

JobState parse_job_state(const std::string& s) {
  for (auto st : {JobState::queued, JobState::running, JobState::done, JobState::degraded, JobState::failed}) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorCode::validation, "unknown job state " + s);
}

std::vector<std::string> read_lines(const fs::path& file) {
  std::vector<std::string> out;
  std::ifstream in(file);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

bool is_terminal_record(const std::string& line) {
  try {
    return Json::parse(line).value("event", "") == "terminal";
  } catch (const Json::exception&) {
    return false;
  }
}

}  // namespace

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::done: return "done";
    case JobState::degraded: return "degraded";
    case JobState::failed: return "failed";
  }
  return "failed";
}

bool is_terminal(JobState s) { return s == JobState::done || s == JobState::degraded || s == JobState::failed; }

std::string_view to_string(RunScope s) { return s == RunScope::full ? "full" : "stale"; }

RunScope parse_scope(const std::string& s) {
  if (s == "full") return RunScope::full;
  if (s == "stale" || s == "stale-only") return RunScope::stale;
  throw Error(ErrorCode::usage, "scope must be full or stale, not '" + s + "'");
}

Json JobHandle::to_json() const {
  Json tasks = Json::object();
  for (const auto& [id, st] : progress) {
    Json t = {{"status", orchestrator::to_string(st.status)}, {"attempts", st.attempts}, {"backoff_delays", st.backoff_delays}};
    if (st.last_error) t["last_error"] = *st.last_error;
    tasks[id] = t;
  }
  Json j = {{"run_id", run_id},
            {"project_id", project_id},
            {"scope", to_string(scope)},
            {"state", to_string(state)},
            {"scheduled", scheduled},
            {"progress", tasks}};
  j["scenario_id"] = scenario_id ? Json(*scenario_id) : Json();
  if (store_hash) j["store_hash"] = *store_hash;
  if (error) j["error"] = *error;
  return j;
}

JobHandle JobHandle::from_json(const Json& j) {
  JobHandle h;
  try {
    h.run_id = j.at("run_id").get<std::string>();
    h.project_id = j.at("project_id").get<std::string>();
    if (j.contains("scenario_id") && j["scenario_id"].is_string()) h.scenario_id = j["scenario_id"].get<std::string>();
    h.scope = parse_scope(j.value("scope", "full"));
    h.state = parse_job_state(j.at("state").get<std::string>());
    for (const auto& t : j.value("scheduled", Json::array())) h.scheduled.insert(t.get<std::string>());
    const Json progress = j.value("progress", Json::object());
    for (const auto& [id, t] : progress.items()) {
      orchestrator::TaskState st;
      st.status = parse_task_status(t.at("status").get<std::string>());
      st.attempts = t.value("attempts", 0);
      st.backoff_delays = t.value("backoff_delays", std::vector<double>{});
      if (t.contains("last_error")) st.last_error = t["last_error"].get<std::string>();
      h.progress[id] = st;
    }
    if (j.contains("store_hash")) h.store_hash = j["store_hash"].get<std::string>();
    if (j.contains("error")) h.error = j["error"].get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("malformed job record: ") + e.what());
  }
  return h;
}

struct RunManager::Active {
  JobHandle handle;
  fs::path dir;
  std::unique_ptr<ProjectLock> lock;
  size_t lines = 0;
};

RunManager::RunManager(std::shared_ptr<Workspace> workspace, Config config, RunnerFactory factory)
    : workspace_(std::move(workspace)), config_(std::move(config)), factory_(std::move(factory)) {
  if (!factory_) factory_ = pipeline_runners;
}

RunManager::~RunManager() {
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
}

orchestrator::TaskGraph RunManager::graph() const {
  return orchestrator::build_task_graph(orchestrator::default_pipeline_specs());
}

void RunManager::persist(const JobHandle& h) const {
  write_file_atomic(workspace_->runs_dir(h.project_id) / h.run_id / "job.json", h.to_json().dump(2) + "\n");
}

JobHandle RunManager::start(const RunRequest& request, bool background) {
  workspace_->require_project(request.project_id);
  std::set<std::string> scheduled;
  if (request.scenario_id) {
    const auto s = workspace_->load_scenario(request.project_id, *request.scenario_id);
    if (request.scope == RunScope::stale) scheduled = s.stale;
  } else if (request.scope == RunScope::stale) {
    scheduled = workspace_->stale_tasks(request.project_id);
  }
  if (request.scope == RunScope::full) {
    const auto g = graph();
    for (const auto& id : g.order()) scheduled.insert(id);
  }

  auto job = std::make_shared<Active>();
  job->lock = std::make_unique<ProjectLock>(workspace_->project_dir(request.project_id));
  JobHandle& h = job->handle;
  h.project_id = request.project_id;
  h.scenario_id = request.scenario_id;
  h.scope = request.scope;
  h.scheduled = scheduled;
  for (const auto& id : scheduled) h.progress[id] = {};
  h.run_id = workspace_->next_run_id(request.project_id);
  job->dir = workspace_->runs_dir(request.project_id) / h.run_id;
  fs::create_directories(job->dir);
  persist(h);
  {
    std::lock_guard lock(mu_);
    active_[h.run_id] = job;
  }
  const JobHandle snapshot = h;
  if (background) {
    std::lock_guard lock(mu_);
    threads_.emplace_back([this, job] { execute(job); });
    return snapshot;
  }
  execute(job);
  return get(snapshot.run_id);
}

void RunManager::execute(const std::shared_ptr<Active>& job) {
  const fs::path log = job->dir / "events.jsonl";
  {
    std::lock_guard lock(mu_);
    job->handle.state = JobState::running;
    persist(job->handle);
  }
  cv_.notify_all();
  const std::string project = job->handle.project_id;
  const auto scenario_id = job->handle.scenario_id;
  JobState final_state = JobState::failed;
  std::optional<std::string> error, hash;
  try {
    std::optional<Scenario> scenario;
    if (scenario_id) scenario = workspace_->load_scenario(project, *scenario_id);
    const auto initial = scenario ? workspace_->scenario_store(project, *scenario) : workspace_->load_store(project);
    const auto runners = factory_(config_);
    auto opt = execution_options(config_);
    opt.scope = job->handle.scheduled;
    opt.log_path = log;
    opt.on_event = [this, job](const Json& rec) {
      {
        std::lock_guard lock(mu_);
        ++job->lines;
        if (rec.value("event", "") == "transition") {
          auto& st = job->handle.progress[rec.at("task").get<std::string>()];
          st.status = parse_task_status(rec.at("to").get<std::string>());
          st.attempts = std::max(st.attempts, rec.value("attempt", 0));
          if (rec.contains("error")) st.last_error = rec["error"].get<std::string>();
        }
      }
      cv_.notify_all();
    };
    const auto outcome = orchestrator::execute_graph(graph(), initial, runners, opt);

    std::set<std::string> done;
    for (const auto& [id, st] : outcome.report.tasks) {
      if (st.status == TaskStatus::completed) done.insert(id);
    }
    if (scenario) {
      workspace_->save_scenario_store(project, scenario->id, outcome.store);
      for (const auto& id : done) scenario->stale.erase(id);
      workspace_->save_scenario(project, *scenario);
    } else {
      workspace_->save_store(project, outcome.store);
      auto stale = workspace_->stale_tasks(project);
      for (const auto& id : done) stale.erase(id);
      workspace_->set_stale_tasks(project, stale);
      if (done.count("reportgen")) {
        workspace_->save_report(project, reportgen::ReportDocument::from_json(outcome.store.results().at("reportgen")));
      }
    }
    {
      std::lock_guard lock(mu_);
      for (const auto& [id, st] : outcome.report.tasks) {
        if (job->handle.scheduled.count(id)) job->handle.progress[id] = st;
      }
    }
    hash = outcome.report.store_hash;
    final_state = outcome.report.overall == orchestrator::Overall::complete
                      ? JobState::done
                      : outcome.report.overall == orchestrator::Overall::degraded ? JobState::degraded : JobState::failed;
  } catch (const std::exception& e) {
    error = e.what();
    final_state = JobState::failed;
    const auto lines = read_lines(log);
    if (lines.empty() || !is_terminal_record(lines.back())) {
      Json rec = {{"event", "terminal"}, {"state", "failed"}, {"error", *error}, {"skipped", Json::array()},
                  {"failed", Json::array()}, {"seq", lines.size()}, {"timestamp", iso8601_now()}};
      std::ofstream(log, std::ios::app) << rec.dump() << '\n';
      std::lock_guard lock(mu_);
      ++job->lines;
    }
  }
  std::lock_guard lock(mu_);
  job->lock.reset();
  job->handle.state = final_state;
  job->handle.store_hash = hash;
  job->handle.error = error;
  persist(job->handle);
  cv_.notify_all();
}

JobHandle RunManager::get(const std::string& run_id) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = active_.find(run_id); it != active_.end()) return it->second->handle;
  }
  const auto [project, dir] = workspace_->locate_run(run_id);
  const fs::path f = dir / "job.json";
  if (!fs::exists(f)) throw Error(ErrorCode::not_found, "unknown run " + run_id);
  return JobHandle::from_json(Json::parse(read_file(f)));
}

JobHandle RunManager::wait(const std::string& run_id) const {
  std::unique_lock lock(mu_);
  auto it = active_.find(run_id);
  if (it == active_.end()) {
    lock.unlock();
    return get(run_id);
  }
  auto job = it->second;
  cv_.wait(lock, [&] { return is_terminal(job->handle.state); });
  return job->handle;
}

std::vector<std::string> RunManager::events(const std::string& run_id, size_t offset, bool& terminal) const {
  const auto [project, dir] = workspace_->locate_run(run_id);
  auto lines = read_lines(dir / "events.jsonl");
  terminal = !lines.empty() && is_terminal_record(lines.back());
  if (offset >= lines.size()) return {};
  return {lines.begin() + static_cast<long>(offset), lines.end()};
}

void RunManager::wait_for_events(const std::string& run_id, size_t offset, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  auto it = active_.find(run_id);
  if (it == active_.end()) return;
  auto job = it->second;
  cv_.wait_for(lock, timeout, [&] { return job->lines > offset || is_terminal(job->handle.state); });
}

}  // namespace leedw::service
