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

#include "leedw/credits/engine.hpp"

#include <algorithm>
#include <cmath>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::credits {

std::string_view to_string(Tri t) {
  switch (t) {
    case Tri::true_: return "true";
    case Tri::false_: return "false";
    case Tri::unknown: return "unknown";
  }
  return "unknown";
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::false_ || b == Tri::false_) return Tri::false_;
  if (a == Tri::unknown || b == Tri::unknown) return Tri::unknown;
  return Tri::true_;
}

Tri tri_or(Tri a, Tri b) {
  if (a == Tri::true_ || b == Tri::true_) return Tri::true_;
  if (a == Tri::unknown || b == Tri::unknown) return Tri::unknown;
  return Tri::false_;
}

Tri tri_not(Tri a) {
  if (a == Tri::unknown) return a;
  return a == Tri::true_ ? Tri::false_ : Tri::true_;
}

namespace {

void absorb(std::set<std::string>& into, const std::set<std::string>& from) { into.insert(from.begin(), from.end()); }

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

NumericResult evaluate_number(const Expr& e, const store::UnifiedStore& store) {
  NumericResult out;
  switch (e.op) {
    case Op::constant: {
      const auto info = units::require(e.unit);
      out.si = e.value * info.scale;
      out.dim = info.dim;
      return out;
    }
    case Op::path: {
      out.used_paths.insert(e.path);
      const auto hit = store::query_path(store, e.path);
      if (!hit || hit->value.is_null()) {
        out.missing_paths.insert(e.path);
        return out;
      }
      if (!hit->quantity) {
        throw Error(ErrorCode::evaluation, e.path + " is not a scalar quantity", {e.path});
      }
      const auto info = units::parse(hit->quantity->unit);
      if (!info) throw Error(ErrorCode::evaluation, e.path + " has unknown unit " + hit->quantity->unit, {e.path});
      if (!e.unit.empty() && !(units::require(e.unit).dim == info->dim)) {
        throw Error(ErrorCode::evaluation,
                    e.path + " has unit " + hit->quantity->unit + ", incompatible with " + e.unit, {e.path});
      }
      out.si = hit->quantity->value * info->scale;
      out.dim = info->dim;
      return out;
    }
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      auto l = evaluate_number(e.args.at(0), store);
      auto r = evaluate_number(e.args.at(1), store);
      absorb(out.used_paths, l.used_paths);
      absorb(out.used_paths, r.used_paths);
      absorb(out.missing_paths, l.missing_paths);
      absorb(out.missing_paths, r.missing_paths);
      if (!l.si || !r.si) return out;
      if ((e.op == Op::add || e.op == Op::sub) && !(l.dim == r.dim)) {
        throw Error(ErrorCode::evaluation, std::string("unit mismatch in \"") + std::string(to_string(e.op)) + "\"");
      }
      switch (e.op) {
        case Op::add: out.si = *l.si + *r.si, out.dim = l.dim; break;
        case Op::sub: out.si = *l.si - *r.si, out.dim = l.dim; break;
        case Op::mul: out.si = *l.si * *r.si, out.dim = l.dim * r.dim; break;
        default:
          out.dim = l.dim / r.dim;
          if (*r.si != 0.0) out.si = *l.si / *r.si;
      }
      return out;
    }
    default:
      throw Error(ErrorCode::evaluation, std::string("operator ") + std::string(to_string(e.op)) +
                                             " is not numeric");
  }
}

ExprResult evaluate_expr(const Expr& e, const store::UnifiedStore& store) {
  ExprResult out;
  switch (e.op) {
    case Op::literal:
      out.value = e.truth ? Tri::true_ : Tri::false_;
      return out;
    case Op::flag: {
      out.used_paths.insert(e.path);
      const auto hit = store::query_path(store, e.path);
      if (!hit || hit->value.is_null()) {
        out.missing_paths.insert(e.path);
        return out;
      }
      if (!hit->value.is_boolean()) throw Error(ErrorCode::evaluation, e.path + " is not a boolean", {e.path});
      out.value = hit->value.get<bool>() ? Tri::true_ : Tri::false_;
      return out;
    }
    case Op::all:
    case Op::any: {
      out.value = e.op == Op::all ? Tri::true_ : Tri::false_;
      for (const auto& a : e.args) {
        auto r = evaluate_expr(a, store);
        out.value = e.op == Op::all ? tri_and(out.value, r.value) : tri_or(out.value, r.value);
        absorb(out.used_paths, r.used_paths);
        absorb(out.missing_paths, r.missing_paths);
      }
      return out;
    }
    case Op::negate: {
      out = evaluate_expr(e.args.at(0), store);
      out.value = tri_not(out.value);
      return out;
    }
    case Op::lt: case Op::le: case Op::eq: case Op::ge: case Op::gt: {
      auto l = evaluate_number(e.args.at(0), store);
      auto r = evaluate_number(e.args.at(1), store);
      absorb(out.used_paths, l.used_paths);
      absorb(out.used_paths, r.used_paths);
      absorb(out.missing_paths, l.missing_paths);
      absorb(out.missing_paths, r.missing_paths);
      if (!l.si || !r.si) return out;
      if (!(l.dim == r.dim)) {
        throw Error(ErrorCode::evaluation, std::string("unit mismatch in comparison \"") +
                                               std::string(to_string(e.op)) + "\"");
      }
      const double a = *l.si, b = *r.si;
      bool v = false;
      switch (e.op) {
        case Op::lt: v = a < b && !nearly_equal(a, b); break;
        case Op::le: v = a <= b || nearly_equal(a, b); break;
        case Op::eq: v = nearly_equal(a, b); break;
        case Op::ge: v = a >= b || nearly_equal(a, b); break;
        default: v = a > b && !nearly_equal(a, b); break;
      }
      out.value = v ? Tri::true_ : Tri::false_;
      return out;
    }
    default:
      throw Error(ErrorCode::evaluation, std::string("operator ") + std::string(to_string(e.op)) +
                                             " is not boolean");
  }
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::achieved: return "achieved";
    case Status::not_achieved: return "not_achieved";
    case Status::indeterminate: return "indeterminate";
    case Status::blocked: return "blocked";
  }
  return "indeterminate";
}

Json ComplianceResult::to_json() const {
  Json ev = Json::array();
  for (const auto& e : evidence) ev.push_back(e.to_json());
  Json j = {{"status", to_string(status)},
            {"awarded_points", store::quantity(awarded_points, "1")},
            {"evidence", ev},
            {"missing_inputs", missing_inputs},
            {"blocked_by", blocked_by}};
  if (metric) j["metric"] = store::quantity(*metric, metric_unit);
  return j;
}

int lookup_points(const CreditRule& rule, double metric_si) {
  int points = 0;
  for (const auto& row : rule.point_table) {
    const double t = row.threshold.si();
    if (t <= metric_si || nearly_equal(t, metric_si)) points = row.points;
  }
  return std::min(points, rule.max_points);
}

namespace {

store::EvidenceSource source_for(const std::string& path) {
  if (path.rfind("$.results.docpipe", 0) == 0) return store::EvidenceSource::document;
  if (path.rfind("$.results.energymod", 0) == 0) return store::EvidenceSource::simulation;
  if (path.rfind("$.results.geo", 0) == 0) return store::EvidenceSource::geo;
  return store::EvidenceSource::user_input;
}

}  // namespace

ComplianceResult evaluate_credit(const CreditRule& rule, const store::UnifiedStore& store,
                                 const std::map<std::string, ComplianceResult>& prereq_results) {
  ComplianceResult out;
  out.credit_id = rule.credit_id;
  bool prereq_unknown = false;
  for (const auto& p : rule.prerequisites) {
    auto it = prereq_results.find(p);
    if (it == prereq_results.end()) {
      throw Error(ErrorCode::evaluation, "no result for prerequisite " + p + " of " + rule.credit_id);
    }
    if (it->second.status == Status::not_achieved || it->second.status == Status::blocked) {
      out.blocked_by.push_back(p);
    } else if (it->second.status == Status::indeterminate) {
      prereq_unknown = true;
    }
  }
  if (!out.blocked_by.empty()) {
    out.status = Status::blocked;
    return out;
  }

  const auto req = evaluate_expr(rule.requirements, store);
  std::set<std::string> used = req.used_paths;
  out.missing_inputs = req.missing_paths;
  bool required_missing = false;
  for (const auto& p : rule.required_inputs) {
    auto hit = store::query_path(store, p);
    if (!hit || hit->value.is_null()) {
      out.missing_inputs.insert(p);
      required_missing = true;
    } else {
      used.insert(p);
    }
  }

  Tri verdict = req.value;
  if (prereq_unknown || required_missing) verdict = Tri::unknown;
  if (verdict == Tri::true_ && rule.metric) {
    const auto m = evaluate_number(*rule.metric, store);
    absorb(used, m.used_paths);
    absorb(out.missing_inputs, m.missing_paths);
    if (m.si && !rule.point_table.empty()) {
      out.metric_unit = rule.point_table.front().threshold.unit;
      out.metric = units::from_si(*m.si, out.metric_unit);
    }
    if (!rule.point_table.empty()) {
      if (!m.si) {
        verdict = Tri::unknown;
      } else {
        out.awarded_points = lookup_points(rule, *m.si);
        if (out.awarded_points == 0) verdict = Tri::false_;
      }
    }
  }
  for (const auto& p : used) {
    if (!out.missing_inputs.count(p) && store::query_path(store, p)) {
      out.evidence.push_back({source_for(p), p, 1.0});
    }
  }
  switch (verdict) {
    case Tri::true_:
      out.status = Status::achieved;
      if (rule.kind == Kind::prerequisite) {
        out.awarded_points = 0;
      } else if (rule.point_table.empty()) {
        out.awarded_points = rule.max_points;
      }
      break;
    case Tri::false_:
      out.status = Status::not_achieved;
      out.awarded_points = 0;
      break;
    case Tri::unknown:
      out.status = Status::indeterminate;
      out.awarded_points = 0;
      break;
  }
  return out;
}

int coverage_percent(int automated, int targeted) {
  if (targeted <= 0) return 0;
  return (200 * automated + targeted) / (2 * targeted);
}

double Scorecard::coverage() const { return targeted > 0 ? static_cast<double>(automated) / targeted : 0.0; }

int Scorecard::coverage_percent() const { return credits::coverage_percent(automated, targeted); }

Json Scorecard::to_json() const {
  Json credits = Json::object();
  for (const auto& [id, r] : results) credits[id] = r.to_json();
  return {{"credits", credits},
          {"total_points", store::quantity(total_points, "1")},
          {"max_points", store::quantity(max_points, "1")},
          {"targeted", store::quantity(targeted, "1")},
          {"automated", store::quantity(automated, "1")},
          {"coverage", store::quantity(coverage(), "1")},
          {"coverage_percent", store::quantity(coverage_percent(), "%")}};
}

std::vector<std::string> evaluation_order(const RuleSet& rules) {
  std::map<std::string, size_t> indegree;
  std::map<std::string, std::vector<std::string>> dependents;
  for (const auto& [id, r] : rules) {
    indegree[id] += 0;
    for (const auto& p : r.prerequisites) {
      if (!rules.count(p)) throw Error(ErrorCode::validation, "unknown prerequisite " + p + " in " + id);
      ++indegree[id];
      dependents[p].push_back(id);
    }
  }
  std::set<std::string> ready;
  for (const auto& [id, n] : indegree) {
    if (n == 0) ready.insert(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    for (const auto& d : dependents[id]) {
      if (--indegree[d] == 0) ready.insert(d);
    }
  }
  if (order.size() != rules.size()) {
    std::vector<std::string> cyclic;
    for (const auto& [id, n] : indegree) {
      if (n > 0) cyclic.push_back(id);
    }
    throw Error(ErrorCode::configuration, "prerequisite cycle among rules", cyclic);
  }
  return order;
}

Scorecard evaluate_all(const RuleSet& rules, const store::UnifiedStore& store) {
  Scorecard sc;
  for (const auto& id : evaluation_order(rules)) {
    const CreditRule& rule = rules.at(id);
    auto r = evaluate_credit(rule, store, sc.results);
    if (rule.kind == Kind::credit) {
      ++sc.targeted;
      sc.max_points += rule.max_points;
      if (r.status != Status::indeterminate) ++sc.automated;
    }
    sc.total_points += r.awarded_points;
    sc.results.emplace(id, std::move(r));
  }
  return sc;
}

std::string_view to_string(GapType t) {
  switch (t) {
    case GapType::shortfall: return "shortfall";
    case GapType::missing_data: return "missing_data";
    case GapType::blocked: return "blocked";
  }
  return "shortfall";
}

Json Gap::to_json() const {
  Json j = {{"credit_id", credit_id}, {"type", to_string(type)}, {"detail", detail}, {"missing_paths", missing_paths}};
  if (distance) j["distance"] = store::quantity(*distance, unit);
  return j;
}

std::vector<Gap> identify_gaps(const Scorecard& scorecard, const RuleSet& rules, const store::UnifiedStore& store) {
  std::vector<Gap> out;
  for (const auto& [id, r] : scorecard.results) {
    if (r.status == Status::achieved) continue;
    const CreditRule& rule = rules.at(id);
    Gap g;
    g.credit_id = id;
    if (r.status == Status::blocked) {
      g.type = GapType::blocked;
      std::string list;
      for (const auto& p : r.blocked_by) list += (list.empty() ? "" : ", ") + p;
      g.detail = "blocked by prerequisite " + list;
    } else if (r.status == Status::indeterminate) {
      g.type = GapType::missing_data;
      g.missing_paths.assign(r.missing_inputs.begin(), r.missing_inputs.end());
      g.detail = g.missing_paths.empty() ? "requirements could not be decided from the available data"
                                         : "missing data: " + std::to_string(g.missing_paths.size()) + " input(s)";
    } else {
      g.type = GapType::shortfall;
      g.detail = "requirements not met";
      if (rule.metric && !rule.point_table.empty()) {
        const auto m = evaluate_number(*rule.metric, store);
        if (m.si) {
          for (const auto& row : rule.point_table) {
            if (row.threshold.si() > *m.si) {
              const double metric = units::from_si(*m.si, row.threshold.unit);
              g.distance = row.threshold.value - metric;
              g.unit = row.threshold.unit;
              g.detail = "metric " + format_number(metric) + " " + row.threshold.unit + " is " +
                         format_number(*g.distance) + " below the next threshold " +
                         format_number(row.threshold.value) + " (" + std::to_string(row.points) + " points)";
              break;
            }
          }
        }
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

Json credits_results(const RuleSet& rules, const store::UnifiedStore& store) {
  const auto sc = evaluate_all(rules, store);
  Json gaps = Json::array();
  for (const auto& g : identify_gaps(sc, rules, store)) gaps.push_back(g.to_json());
  Json j = sc.to_json();
  Json out = {{"scorecard", j}, {"gaps", gaps}};
  return out;
}

}  // namespace leedw::credits
