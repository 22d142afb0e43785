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

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "leedw/datastore/store.hpp"
#include "leedw/orchestrator/graph.hpp"

namespace leedw::orchestrator {

enum class TaskStatus { pending, running, completed, failed, skipped, stale };
std::string_view to_string(TaskStatus s);

struct TaskState {
  TaskStatus status = TaskStatus::pending;
  int attempts = 0;
  std::optional<std::string> last_error;
  std::vector<double> backoff_delays;  // seconds slept before each retry

  bool operator==(const TaskState&) const = default;
};

struct RetryPolicy {
  int max_attempts = 3;
  double base_delay = 0.5;  // seconds
  double backoff_factor = 2.0;

  /// Throws Error(configuration) when an invariant is violated.
  void validate() const;
};

enum class FailureKind { transient, permanent };

struct RetryDecision {
  bool retry = false;
  double delay = 0.0;  // seconds, meaningful when retry is true
};

/// Retry iff the failure is transient and attempt < max_attempts; the delay
/// before the next attempt is base_delay * backoff_factor^(attempt-1).
RetryDecision apply_retry_policy(FailureKind failure, int attempt, const RetryPolicy& policy);

enum class Overall { complete, degraded, failed };
std::string_view to_string(Overall o);

struct RunReport {
  std::map<std::string, TaskState> tasks;
  Overall overall = Overall::complete;
  std::string store_hash;

  std::vector<std::string> with_status(TaskStatus s) const;
};

struct TaskContext {
  const TaskSpec& spec;
  const store::UnifiedStore& snapshot;  // initial store plus completed ancestors' results
  int attempt;
};

/// Returns a results delta keyed by module name. Throwing leedw::Error with
/// code transient requests a retry; any other exception fails the task.
using TaskRunner = std::function<Json(const TaskContext&)>;

/// Soft admission control: while sampled memory use is above the threshold,
/// no new task is launched unless nothing is running.
struct MemoryWatchdog {
  double threshold = 0.70;
  /// Fraction of system memory in use by this process; defaults to /proc.
  std::function<double()> sample;
};

/// Resident set size of this process over total system memory.
double process_memory_fraction();

struct ExecutionOptions {
  std::size_t workers = 1;
  RetryPolicy retry;
  MemoryWatchdog memory;
  /// Restricts execution to these tasks; others are assumed already done.
  std::optional<std::set<std::string>> scope;
  /// Receives each run-log record, in log order.
  std::function<void(const Json&)> on_event;
  /// When set, records are appended here as line-delimited JSON.
  std::filesystem::path log_path;
  std::function<void(double seconds)> sleep;
};

struct RunOutcome {
  RunReport report;
  store::UnifiedStore store;
};

/// Runs the graph on a worker pool. The final store is the initial store
/// plus every completed task's delta, merged in the graph's canonical order,
/// so it does not depend on the worker count or completion timing.
RunOutcome execute_graph(const TaskGraph& graph, const store::UnifiedStore& initial,
                         const std::map<std::string, TaskRunner>& runners,
                         const ExecutionOptions& options = {});

}  // namespace leedw::orchestrator
