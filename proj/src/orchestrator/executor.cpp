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

#include "leedw/orchestrator/executor.hpp"

#include <unistd.h>

#include <cmath>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <thread>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::orchestrator {

std::string_view to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::pending: return "pending";
    case TaskStatus::running: return "running";
    case TaskStatus::completed: return "completed";
    case TaskStatus::failed: return "failed";
    case TaskStatus::skipped: return "skipped";
    case TaskStatus::stale: return "stale";
  }
  return "pending";
}

std::string_view to_string(Overall o) {
  switch (o) {
    case Overall::complete: return "complete";
    case Overall::degraded: return "degraded";
    case Overall::failed: return "failed";
  }
  return "failed";
}

void RetryPolicy::validate() const {
  if (max_attempts < 1) throw Error(ErrorCode::configuration, "retry max_attempts must be >= 1");
  if (!(base_delay >= 0)) throw Error(ErrorCode::configuration, "retry base_delay must be >= 0");
  if (!(backoff_factor >= 1)) throw Error(ErrorCode::configuration, "retry backoff_factor must be >= 1");
}

RetryDecision apply_retry_policy(FailureKind failure, int attempt, const RetryPolicy& policy) {
  if (failure != FailureKind::transient || attempt >= policy.max_attempts) return {false, 0.0};
  return {true, policy.base_delay * std::pow(policy.backoff_factor, attempt - 1)};
}

std::vector<std::string> RunReport::with_status(TaskStatus s) const {
  std::vector<std::string> out;
  for (const auto& [id, st] : tasks) {
    if (st.status == s) out.push_back(id);
  }
  return out;
}

double process_memory_fraction() {
  std::ifstream statm("/proc/self/statm");
  long size = 0, resident = 0;
  if (!(statm >> size >> resident)) return 0.0;
  const long pages = ::sysconf(_SC_PHYS_PAGES);
  return pages > 0 ? static_cast<double>(resident) / static_cast<double>(pages) : 0.0;
}

namespace {

// Serializes run-log records: one sequence, one file, one callback.
class EventLog {
 public:
  explicit EventLog(const ExecutionOptions& opts) : on_event_(opts.on_event) {
    if (!opts.log_path.empty()) {
      if (opts.log_path.has_parent_path()) std::filesystem::create_directories(opts.log_path.parent_path());
      file_.open(opts.log_path, std::ios::app);
      if (!file_) throw Error(ErrorCode::io, "cannot open run log " + opts.log_path.string());
    }
  }

  void transition(const std::string& task, TaskStatus from, TaskStatus to, int attempt,
                  const std::optional<std::string>& error = std::nullopt) {
    Json rec = {{"event", "transition"}, {"task", task}, {"from", to_string(from)},
                {"to", to_string(to)}, {"attempt", attempt}};
    if (error) rec["error"] = *error;
    emit(std::move(rec));
  }

  void emit(Json rec) {
    std::lock_guard lock(mu_);
    rec["seq"] = seq_++;
    rec["timestamp"] = iso8601_now();
    if (file_) {
      file_ << rec.dump() << '\n';
      file_.flush();
    }
    if (on_event_) on_event_(rec);
  }

 private:
  std::mutex mu_;
  std::ofstream file_;
  std::function<void(const Json&)> on_event_;
  long seq_ = 0;
};

struct Job {
  std::string id;
  store::UnifiedStore snapshot;
};

struct Completion {
  std::string id;
  bool ok = false;
  Json delta;
  TaskState state;
  std::string finished_at;
};

}  // namespace

RunOutcome execute_graph(const TaskGraph& graph, const store::UnifiedStore& initial,
                         const std::map<std::string, TaskRunner>& runners,
                         const ExecutionOptions& options) {
  options.retry.validate();
  if (options.workers < 1) throw Error(ErrorCode::parameter, "workers must be >= 1");
  const auto in_scope = [&](const std::string& id) {
    return !options.scope || options.scope->count(id) > 0;
  };
  const auto sleep = options.sleep ? options.sleep : [](double s) {
    std::this_thread::sleep_for(std::chrono::duration<double>(s));
  };
  const auto sample = options.memory.sample ? options.memory.sample : process_memory_fraction;

  EventLog log(options);
  std::map<std::string, size_t> rank;
  for (size_t i = 0; i < graph.order().size(); ++i) rank[graph.order()[i]] = i;

  std::map<std::string, TaskState> states;
  std::map<std::string, size_t> waiting_on;
  std::set<size_t> ready;
  for (const auto& id : graph.order()) {
    if (!in_scope(id)) continue;
    states[id] = TaskState{};
    size_t n = 0;
    for (const auto& dep : graph.at(id).depends_on) n += in_scope(dep) ? 1 : 0;
    waiting_on[id] = n;
    if (n == 0) ready.insert(rank[id]);
  }

  std::mutex mu;
  std::condition_variable work_cv, done_cv;
  std::deque<Job> queue;
  std::deque<Completion> completions;
  bool stopping = false;

  auto worker = [&] {
    for (;;) {
      Job job;
      {
        std::unique_lock lock(mu);
        work_cv.wait(lock, [&] { return stopping || !queue.empty(); });
        if (queue.empty()) return;
        job = std::move(queue.front());
        queue.pop_front();
      }
      const TaskSpec& spec = graph.at(job.id);
      Completion c{job.id, false, Json::object(), TaskState{}, {}};
      for (int attempt = 1;; ++attempt) {
        c.state.attempts = attempt;
        FailureKind kind = FailureKind::permanent;
        try {
          auto it = runners.find(spec.id);
          if (it == runners.end()) it = runners.find(spec.module);
          if (it == runners.end()) {
            throw Error(ErrorCode::configuration, "no runner registered for task '" + spec.id + "'");
          }
          Json delta = it->second(TaskContext{spec, job.snapshot, attempt});
          if (delta.is_null()) delta = Json::object();
          if (!delta.is_object()) throw Error(ErrorCode::protocol, "task returned a non-object delta");
          for (auto d = delta.begin(); d != delta.end(); ++d) {
            if (d.key() != spec.module) {
              throw Error(ErrorCode::conflict, "task '" + spec.id + "' wrote $.results." + d.key() +
                                                   " outside module '" + spec.module + "'");
            }
          }
          c.ok = true;
          c.delta = std::move(delta);
          break;
        } catch (const Error& e) {
          c.state.last_error = e.what();
          kind = e.transient() && spec.retryable ? FailureKind::transient : FailureKind::permanent;
        } catch (const std::exception& e) {
          c.state.last_error = e.what();
        }
        const auto decision = apply_retry_policy(kind, attempt, options.retry);
        if (!decision.retry) break;
        log.transition(spec.id, TaskStatus::running, TaskStatus::pending, attempt, c.state.last_error);
        sleep(decision.delay);
        c.state.backoff_delays.push_back(decision.delay);
        log.transition(spec.id, TaskStatus::pending, TaskStatus::running, attempt + 1);
      }
      c.finished_at = iso8601_now();
      {
        std::lock_guard lock(mu);
        completions.push_back(std::move(c));
      }
      done_cv.notify_one();
    }
  };

  const size_t total = states.size();
  std::vector<std::thread> pool;
  for (size_t i = 0; i < std::min(options.workers, std::max<size_t>(total, 1)); ++i) pool.emplace_back(worker);

  std::map<std::string, Json> deltas;
  std::map<std::string, std::string> finished_at;
  size_t settled = 0, running = 0;
  bool memory_paused = false;

  auto snapshot_for = [&](const std::string& id) {
    store::UnifiedStore snap = initial;
    const auto anc = graph.ancestors(id);
    for (const auto& a : graph.order()) {
      if (anc.count(a) && deltas.count(a)) {
        snap = store::merge_module_results(snap, graph.at(a).module, deltas[a], {a, finished_at[a]});
      }
    }
    return snap;
  };

  try {
    while (settled < total) {
      while (!ready.empty() && running < options.workers) {
        const double used = sample();
        if (used > options.memory.threshold) {
          if (!memory_paused) {
            log.emit({{"event", "warning"},
                      {"message", "memory use " + format_number(used) + " above threshold " +
                                      format_number(options.memory.threshold)}});
            memory_paused = true;
          }
          if (running > 0) break;
        } else {
          memory_paused = false;
        }
        const std::string id = graph.order()[*ready.begin()];
        ready.erase(ready.begin());
        states[id].status = TaskStatus::running;
        states[id].attempts = 1;
        log.transition(id, TaskStatus::pending, TaskStatus::running, 1);
        Job job{id, snapshot_for(id)};
        {
          std::lock_guard lock(mu);
          queue.push_back(std::move(job));
        }
        ++running;
        work_cv.notify_one();
      }
      if (settled >= total) break;

      std::deque<Completion> batch;
      {
        std::unique_lock lock(mu);
        done_cv.wait(lock, [&] { return !completions.empty(); });
        batch.swap(completions);
      }
      // Handle in canonical order so skip events do not depend on timing.
      std::sort(batch.begin(), batch.end(),
                [&](const Completion& a, const Completion& b) { return rank[a.id] < rank[b.id]; });
      for (auto& c : batch) {
        --running;
        ++settled;
        TaskState& st = states[c.id];
        st.attempts = c.state.attempts;
        st.last_error = c.state.last_error;
        st.backoff_delays = c.state.backoff_delays;
        if (c.ok) {
          st.status = TaskStatus::completed;
          st.last_error.reset();
          deltas[c.id] = std::move(c.delta);
          finished_at[c.id] = c.finished_at;
          log.transition(c.id, TaskStatus::running, TaskStatus::completed, st.attempts);
          for (const auto& child : graph.children(c.id)) {
            if (in_scope(child) && --waiting_on[child] == 0 && states[child].status == TaskStatus::pending) {
              ready.insert(rank[child]);
            }
          }
        } else {
          st.status = TaskStatus::failed;
          log.transition(c.id, TaskStatus::running, TaskStatus::failed, st.attempts, st.last_error);
          const auto desc = graph.descendants(c.id);
          for (const auto& id : graph.order()) {
            if (!desc.count(id) || !in_scope(id) || states[id].status != TaskStatus::pending) continue;
            states[id].status = TaskStatus::skipped;
            states[id].last_error = "ancestor '" + c.id + "' failed";
            ready.erase(rank[id]);
            ++settled;
            log.transition(id, TaskStatus::pending, TaskStatus::skipped, 0, states[id].last_error);
          }
        }
      }
    }
  } catch (...) {
    {
      std::lock_guard lock(mu);
      stopping = true;
    }
    work_cv.notify_all();
    for (auto& t : pool) t.join();
    throw;
  }
  {
    std::lock_guard lock(mu);
    stopping = true;
  }
  work_cv.notify_all();
  for (auto& t : pool) t.join();

  RunOutcome out{RunReport{}, initial};
  for (const auto& id : graph.order()) {
    if (deltas.count(id)) {
      out.store = store::merge_module_results(out.store, graph.at(id).module, deltas[id], {id, finished_at[id]});
    }
  }
  out.report.tasks = states;
  size_t completed = 0, bad = 0;
  for (const auto& [_, st] : states) {
    if (st.status == TaskStatus::completed) ++completed;
    if (st.status == TaskStatus::failed || st.status == TaskStatus::skipped) ++bad;
  }
  out.report.overall = bad == 0 ? Overall::complete : (completed > 0 ? Overall::degraded : Overall::failed);
  out.report.store_hash = store::content_hash(out.store);

  const std::string state = out.report.overall == Overall::complete ? "done" : std::string(to_string(out.report.overall));
  log.emit({{"event", "terminal"},
            {"state", state},
            {"skipped", out.report.with_status(TaskStatus::skipped)},
            {"failed", out.report.with_status(TaskStatus::failed)},
            {"store_hash", out.report.store_hash}});
  return out;
}

}  // namespace leedw::orchestrator
