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

#include "leedw/orchestrator/graph.hpp"

#include <algorithm>
#include <functional>

#include "leedw/common/error.hpp"
#include "leedw/datastore/path.hpp"

namespace leedw::orchestrator {

namespace {

// Returns the ids along one cycle, starting from its smallest member.
std::vector<std::string> find_cycle(const std::map<std::string, TaskSpec>& tasks) {
  enum class Mark { none, active, done };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::vector<std::string> cycle;

  std::function<bool(const std::string&)> visit = [&](const std::string& id) {
    mark[id] = Mark::active;
    stack.push_back(id);
    for (const auto& dep : tasks.at(id).depends_on) {
      if (mark[dep] == Mark::active) {
        auto it = std::find(stack.begin(), stack.end(), dep);
        cycle.assign(it, stack.end());
        return true;
      }
      if (mark[dep] == Mark::none && visit(dep)) return true;
    }
    stack.pop_back();
    mark[id] = Mark::done;
    return false;
  };
  for (const auto& [id, _] : tasks) {
    if (mark[id] == Mark::none && visit(id)) break;
  }
  if (!cycle.empty()) {
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
  }
  return cycle;
}

}  // namespace

TaskGraph build_task_graph(std::vector<TaskSpec> specs) {
  TaskGraph g;
  for (auto& s : specs) {
    if (s.id.empty()) throw Error(ErrorCode::validation, "task with empty id");
    const std::string id = s.id;
    if (!g.tasks_.emplace(id, std::move(s)).second) {
      throw Error(ErrorCode::validation, "duplicate task id '" + id + "'");
    }
  }
  for (const auto& [id, spec] : g.tasks_) {
    g.children_[id];
    for (const auto& dep : spec.depends_on) {
      if (!g.tasks_.count(dep)) {
        throw Error(ErrorCode::validation, "task '" + id + "' depends on undeclared task '" + dep + "'");
      }
      g.children_[dep].insert(id);
    }
  }
  // produces must be pairwise disjoint across tasks
  std::vector<std::pair<store::Path, std::string>> produced;
  for (const auto& [id, spec] : g.tasks_) {
    for (const auto& p : spec.produces) {
      auto path = store::Path::parse(p);
      for (const auto& [other, owner] : produced) {
        if (owner != id && other.overlaps(path)) {
          throw Error(ErrorCode::validation, "tasks '" + owner + "' and '" + id +
                                                 "' both produce " + path.str());
        }
      }
      produced.emplace_back(path, id);
    }
  }

  // Kahn's algorithm; std::set keeps the ready frontier in lexicographic order.
  std::map<std::string, size_t> indegree;
  for (const auto& [id, spec] : g.tasks_) indegree[id] = spec.depends_on.size();
  std::set<std::string> ready;
  for (const auto& [id, n] : indegree) {
    if (n == 0) ready.insert(id);
  }
  while (!ready.empty()) {
    const std::string id = *ready.begin();
    ready.erase(ready.begin());
    g.order_.push_back(id);
    for (const auto& child : g.children_[id]) {
      if (--indegree[child] == 0) ready.insert(child);
    }
  }
  if (g.order_.size() != g.tasks_.size()) {
    const auto cycle = find_cycle(g.tasks_);
    std::string names;
    for (const auto& c : cycle) names += (names.empty() ? "" : ", ") + c;
    throw Error(ErrorCode::configuration, "dependency cycle: " + names, cycle);
  }
  return g;
}

std::set<std::string> TaskGraph::descendants(const std::string& id) const {
  std::set<std::string> seen;
  std::vector<std::string> frontier{id};
  while (!frontier.empty()) {
    auto cur = frontier.back();
    frontier.pop_back();
    for (const auto& c : children_.at(cur)) {
      if (seen.insert(c).second) frontier.push_back(c);
    }
  }
  return seen;
}

std::set<std::string> TaskGraph::ancestors(const std::string& id) const {
  std::set<std::string> seen;
  std::vector<std::string> frontier{id};
  while (!frontier.empty()) {
    auto cur = frontier.back();
    frontier.pop_back();
    for (const auto& d : tasks_.at(cur).depends_on) {
      if (seen.insert(d).second) frontier.push_back(d);
    }
  }
  return seen;
}

std::vector<TaskSpec> default_pipeline_specs() {
  return {
      {"docpipe", "docpipe", {}, true, {"$.results.docpipe"}, {"$.project", "$.inputs.documents"}},
      {"geo", "geo", {}, true, {"$.results.geo"}, {"$.project", "$.inputs.site"}},
      {"energymod",
       "energymod",
       {"docpipe"},
       true,
       {"$.results.energymod"},
       {"$.project", "$.inputs.building", "$.inputs.baseline_building", "$.inputs.weather"}},
      {"credits",
       "credits",
       {"docpipe", "energymod", "geo"},
       true,
       {"$.results.credits"},
       {"$.project", "$.inputs.water", "$.inputs.materials", "$.inputs.ieq", "$.inputs.innovation",
        "$.inputs.site"}},
      {"reportgen",
       "reportgen",
       {"credits", "energymod", "geo"},
       true,
       {"$.results.reportgen"},
       {"$.project"}},
  };
}

std::set<std::string> invalidate_downstream(const TaskGraph& graph,
                                            const std::set<std::string>& changed_paths) {
  std::vector<store::Path> changed;
  for (const auto& c : changed_paths) changed.push_back(store::Path::parse(c));
  std::set<std::string> stale;
  for (const auto& [id, spec] : graph.tasks()) {
    bool hit = false;
    for (const auto& r : spec.reads) {
      const auto read = store::Path::parse(r);
      for (const auto& c : changed) {
        if (read.overlaps(c)) hit = true;
      }
    }
    if (hit) {
      stale.insert(id);
      auto d = graph.descendants(id);
      stale.insert(d.begin(), d.end());
    }
  }
  return stale;
}

}  // namespace leedw::orchestrator
