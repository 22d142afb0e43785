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

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "leedw/orchestrator/executor.hpp"
#include "leedw/service/config.hpp"
#include "leedw/service/workspace.hpp"

namespace leedw::service {

enum class JobState { queued, running, done, degraded, failed };

std::string_view to_string(JobState s);
bool is_terminal(JobState s);

enum class RunScope { full, stale };

std::string_view to_string(RunScope s);
/// Throws Error(usage) for anything but "full" or "stale".
RunScope parse_scope(const std::string& s);

struct JobHandle {
  std::string run_id;
  std::string project_id;
  std::optional<std::string> scenario_id;
  RunScope scope = RunScope::full;
  JobState state = JobState::queued;
  std::set<std::string> scheduled;
  std::map<std::string, orchestrator::TaskState> progress;
  std::optional<std::string> store_hash;
  std::optional<std::string> error;

  Json to_json() const;
  static JobHandle from_json(const Json& j);
};

struct RunRequest {
  std::string project_id;
  RunScope scope = RunScope::full;
  std::optional<std::string> scenario_id;
};

/// Starts and tracks pipeline runs. A run holds its project's lock from
/// start() until it finishes; events go to runs/<id>/events.jsonl.
class RunManager {
 public:
  using RunnerFactory = std::function<std::map<std::string, orchestrator::TaskRunner>(const Config&)>;

  RunManager(std::shared_ptr<Workspace> workspace, Config config, RunnerFactory factory = {});
  ~RunManager();
  RunManager(const RunManager&) = delete;
  RunManager& operator=(const RunManager&) = delete;

  /// Unknown project or scenario -> Error(not_found); a run already active on
  /// the project -> Error(conflict). With `background` false the run
  /// completes before this returns.
  JobHandle start(const RunRequest& request, bool background = true);

  /// Live state for runs of this process, else the persisted job file.
  JobHandle get(const std::string& run_id) const;
  /// Blocks until the run is terminal.
  JobHandle wait(const std::string& run_id) const;

  /// Run-log lines from `offset` (a line count). Sets `terminal` when the
  /// last returned line is the terminal record.
  std::vector<std::string> events(const std::string& run_id, size_t offset, bool& terminal) const;
  /// Blocks until lines past `offset` exist or the run is terminal.
  void wait_for_events(const std::string& run_id, size_t offset, std::chrono::milliseconds timeout) const;

  const Workspace& workspace() const { return *workspace_; }
  const Config& config() const { return config_; }
  orchestrator::TaskGraph graph() const;

 private:
  struct Active;
  void execute(const std::shared_ptr<Active>& job);
  void persist(const JobHandle& h) const;

  std::shared_ptr<Workspace> workspace_;
  Config config_;
  RunnerFactory factory_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::map<std::string, std::shared_ptr<Active>> active_;
  std::vector<std::thread> threads_;
};

}  // namespace leedw::service
