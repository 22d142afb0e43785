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

#include <map>
#include <set>
#include <string>
#include <vector>

namespace leedw::orchestrator {

struct TaskSpec {
  std::string id;
  std::string module;
  std::set<std::string> depends_on;
  bool retryable = true;
  std::set<std::string> produces;  // results paths this task owns
  std::set<std::string> reads;     // input paths whose change makes the task stale
};

/// Validated, acyclic dependency graph with a canonical execution order
/// (topological, ties broken lexicographically by task id).
class TaskGraph {
 public:
  TaskGraph() = default;

  const std::map<std::string, TaskSpec>& tasks() const { return tasks_; }
  const std::vector<std::string>& order() const { return order_; }
  bool contains(const std::string& id) const { return tasks_.count(id) > 0; }
  const TaskSpec& at(const std::string& id) const { return tasks_.at(id); }
  const std::set<std::string>& children(const std::string& id) const { return children_.at(id); }

  std::set<std::string> descendants(const std::string& id) const;
  std::set<std::string> ancestors(const std::string& id) const;
  std::size_t size() const { return tasks_.size(); }

 private:
  friend TaskGraph build_task_graph(std::vector<TaskSpec> specs);
  std::map<std::string, TaskSpec> tasks_;
  std::map<std::string, std::set<std::string>> children_;
  std::vector<std::string> order_;
};

/// Throws Error(validation) for duplicate ids, overlapping `produces`, or a
/// dependency on an undeclared task, and Error(configuration) naming the
/// members of a cycle.
TaskGraph build_task_graph(std::vector<TaskSpec> specs);

/// The review pipeline: docpipe feeds energymod and credits, geo is a root,
/// credits also consumes energymod and geo results, and reportgen waits for
/// credits, energymod and geo.
std::vector<TaskSpec> default_pipeline_specs();

/// Tasks whose declared reads overlap any changed path, plus all of their
/// descendants.
std::set<std::string> invalidate_downstream(const TaskGraph& graph,
                                            const std::set<std::string>& changed_paths);

}  // namespace leedw::orchestrator
