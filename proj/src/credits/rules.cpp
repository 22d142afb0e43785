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

#include "leedw/credits/rules.hpp"

#include <algorithm>
#include <fstream>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"
#include "leedw/datastore/path.hpp"

namespace leedw::credits {

namespace {

constexpr std::string_view kCategories[] = {"LT", "SS", "WE", "EA", "MR", "EQ", "IN"};

struct OpName {
  std::string_view name;
  Op op;
};

constexpr OpName kOps[] = {
    {"literal", Op::literal}, {"flag", Op::flag}, {"<", Op::lt},      {"<=", Op::le},    {"≤", Op::le},
    {"=", Op::eq},            {"==", Op::eq},     {">=", Op::ge},     {"≥", Op::ge},     {">", Op::gt},
    {"all", Op::all},         {"any", Op::any},   {"not", Op::negate}, {"+", Op::add},   {"-", Op::sub},
    {"*", Op::mul},           {"/", Op::div},
};

[[noreturn]] void fail(const std::string& where, const std::string& what, ErrorCode code = ErrorCode::validation) {
  throw Error(code, where + ": " + what, {where});
}

std::optional<units::Dimension> unit_dim(const std::string& where, const std::string& unit) {
  auto info = units::parse(unit);
  if (!info) fail(where, "unknown unit \"" + unit + "\"");
  return info->dim;
}

std::string check_path(const std::string& where, const Json& node) {
  if (!node.is_string()) fail(where, "path must be a string");
  const auto text = node.get<std::string>();
  try {
    store::Path::parse(text);
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return text;
}

struct Parsed {
  Expr expr;
  std::optional<units::Dimension> dim;  // numeric nodes only; nullopt = unknown
};

Parsed parse_expr(const Json& j, const std::string& where, bool want_bool);

Parsed parse_operand(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(where, "missing \"" + key + "\"");
  return parse_expr(j.at(key), where + "/" + key, false);
}

Parsed parse_expr(const Json& j, const std::string& where, bool want_bool) {
  Parsed out;
  Expr& e = out.expr;
  if (j.is_boolean()) {
    if (!want_bool) fail(where, "expected a numeric expression");
    e.op = Op::literal;
    e.truth = j.get<bool>();
    return out;
  }
  if (!j.is_object()) fail(where, "expression must be an object");

  if (!j.contains("op")) {
    if (want_bool) fail(where, "expected a boolean expression");
    if (j.contains("path")) {
      e.op = Op::path;
      e.path = check_path(where + "/path", j["path"]);
      e.unit = "";
      if (j.contains("unit")) {
        if (!j["unit"].is_string()) fail(where + "/unit", "unit must be a string");
        e.unit = j["unit"].get<std::string>();
        out.dim = unit_dim(where + "/unit", e.unit);
      }
      return out;
    }
    if (j.contains("value")) {
      if (!j["value"].is_number()) fail(where + "/value", "value must be a number");
      e.op = Op::constant;
      e.value = j["value"].get<double>();
      e.unit = j.value("unit", std::string("1"));
      out.dim = unit_dim(where + "/unit", e.unit);
      return out;
    }
    fail(where, "expression needs \"op\", \"path\" or \"value\"");
  }

  if (!j["op"].is_string()) fail(where + "/op", "operator must be a string", ErrorCode::parse);
  const auto name = j["op"].get<std::string>();
  auto it = std::find_if(std::begin(kOps), std::end(kOps), [&](const OpName& o) { return o.name == name; });
  if (it == std::end(kOps)) fail(where + "/op", "unknown operator \"" + name + "\"", ErrorCode::parse);
  e.op = it->op;
  if (is_boolean(e.op) != want_bool) {
    fail(where, std::string("operator \"") + name + "\" where a " + (want_bool ? "boolean" : "numeric") +
                    " expression is expected");
  }

  switch (e.op) {
    case Op::literal:
      if (!j.contains("value") || !j["value"].is_boolean()) fail(where, "literal needs a boolean value");
      e.truth = j["value"].get<bool>();
      break;
    case Op::flag:
      if (!j.contains("path")) fail(where, "flag needs a path");
      e.path = check_path(where + "/path", j["path"]);
      break;
    case Op::all:
    case Op::any: {
      if (!j.contains("args") || !j["args"].is_array()) fail(where, name + " needs an args array");
      for (size_t i = 0; i < j["args"].size(); ++i) {
        e.args.push_back(parse_expr(j["args"][i], where + "/args/" + std::to_string(i), true).expr);
      }
      break;
    }
    case Op::negate:
      if (!j.contains("arg")) fail(where, "not needs an arg");
      e.args.push_back(parse_expr(j["arg"], where + "/arg", true).expr);
      break;
    case Op::lt: case Op::le: case Op::eq: case Op::ge: case Op::gt:
    case Op::add: case Op::sub: case Op::mul: case Op::div: {
      auto lhs = parse_operand(j, "lhs", where);
      auto rhs = parse_operand(j, "rhs", where);
      const bool additive = e.op != Op::mul && e.op != Op::div;
      if (additive && lhs.dim && rhs.dim && !(*lhs.dim == *rhs.dim)) {
        fail(where, "unit mismatch between operands of \"" + name + "\"");
      }
      if (e.op == Op::add || e.op == Op::sub) out.dim = lhs.dim ? lhs.dim : rhs.dim;
      if (e.op == Op::mul && lhs.dim && rhs.dim) out.dim = *lhs.dim * *rhs.dim;
      if (e.op == Op::div && lhs.dim && rhs.dim) out.dim = *lhs.dim / *rhs.dim;
      e.args.push_back(std::move(lhs.expr));
      e.args.push_back(std::move(rhs.expr));
      break;
    }
    default:
      fail(where, "unsupported operator \"" + name + "\"");
  }
  return out;
}

std::set<std::string> string_set(const Json& j, const std::string& where) {
  std::set<std::string> out;
  if (j.is_null()) return out;
  if (!j.is_array()) fail(where, "expected an array of strings");
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(where + "/" + std::to_string(i), "expected a string");
    out.insert(j[i].get<std::string>());
  }
  return out;
}

CreditRule parse_rule(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "rule must be an object");
  CreditRule r;
  if (!j.contains("credit_id") || !j["credit_id"].is_string() || j["credit_id"].get<std::string>().empty()) {
    fail(where + "/credit_id", "credit_id must be a non-empty string");
  }
  r.credit_id = j["credit_id"].get<std::string>();
  r.name = j.value("name", r.credit_id);
  r.description = j.value("description", std::string());
  auto cat = parse_category(j.value("category", std::string()));
  if (!cat) fail(where + "/category", "category must be one of LT, SS, WE, EA, MR, EQ, IN");
  r.category = *cat;
  const auto kind = j.value("kind", std::string("credit"));
  if (kind != "credit" && kind != "prerequisite") fail(where + "/kind", "kind must be credit or prerequisite");
  r.kind = kind == "credit" ? Kind::credit : Kind::prerequisite;
  if (j.contains("max_points")) {
    if (!j["max_points"].is_number_integer() || j["max_points"].get<int>() < 0) {
      fail(where + "/max_points", "max_points must be a non-negative integer");
    }
    r.max_points = j["max_points"].get<int>();
  }
  if (r.kind == Kind::prerequisite && r.max_points != 0) fail(where + "/max_points", "prerequisites carry no points");
  if (!j.contains("requirements")) fail(where, "missing requirements");
  r.requirements = parse_expr(j["requirements"], where + "/requirements", true).expr;

  std::optional<units::Dimension> metric_dim;
  if (j.contains("metric")) {
    auto m = parse_expr(j["metric"], where + "/metric", false);
    r.metric = std::move(m.expr);
    metric_dim = m.dim;
  }
  if (j.contains("point_table")) {
    const Json& t = j["point_table"];
    if (!t.is_array()) fail(where + "/point_table", "point_table must be an array");
    if (!r.metric) fail(where + "/point_table", "point_table requires a metric");
    for (size_t i = 0; i < t.size(); ++i) {
      const std::string at = where + "/point_table/" + std::to_string(i);
      const Json& row = t[i];
      if (!row.is_object() || !row.contains("threshold") || !row.contains("points")) {
        fail(at, "row needs threshold and points");
      }
      const Json& th = row["threshold"];
      PointRow pr;
      if (th.is_object() && th.contains("value") && th["value"].is_number()) {
        pr.threshold = {th["value"].get<double>(), th.value("unit", std::string("1"))};
      } else {
        fail(at + "/threshold", "threshold must be {\"value\", \"unit\"}");
      }
      auto dim = unit_dim(at + "/threshold/unit", pr.threshold.unit);
      if (metric_dim && !(*metric_dim == *dim)) fail(at + "/threshold", "threshold unit incompatible with metric");
      if (!row["points"].is_number_integer()) fail(at + "/points", "points must be an integer");
      pr.points = row["points"].get<int>();
      r.point_table.push_back(pr);
    }
  }
  r.prerequisites = string_set(j.value("prerequisites", Json()), where + "/prerequisites");
  r.required_inputs = string_set(j.value("required_inputs", Json()), where + "/required_inputs");
  for (const auto& p : r.required_inputs) check_path(where + "/required_inputs", p);
  return r;
}

std::pair<size_t, size_t> line_column(std::string_view text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string_view to_string(Category c) { return kCategories[static_cast<int>(c)]; }

std::string_view to_string(Kind k) { return k == Kind::credit ? "credit" : "prerequisite"; }

std::optional<Category> parse_category(std::string_view s) {
  for (int i = 0; i < 7; ++i) {
    if (kCategories[i] == s) return static_cast<Category>(i);
  }
  return std::nullopt;
}

int category_rank(Category c) { return static_cast<int>(c); }

std::string_view to_string(Op op) {
  switch (op) {
    case Op::literal: return "literal";
    case Op::flag: return "flag";
    case Op::lt: return "<";
    case Op::le: return "<=";
    case Op::eq: return "=";
    case Op::ge: return ">=";
    case Op::gt: return ">";
    case Op::all: return "all";
    case Op::any: return "any";
    case Op::negate: return "not";
    case Op::constant: return "constant";
    case Op::path: return "path";
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
  }
  return "?";
}

bool is_boolean(Op op) {
  switch (op) {
    case Op::constant: case Op::path: case Op::add: case Op::sub: case Op::mul: case Op::div:
      return false;
    default:
      return true;
  }
}

Json Expr::to_json() const {
  switch (op) {
    case Op::literal: return {{"op", "literal"}, {"value", truth}};
    case Op::flag: return {{"op", "flag"}, {"path", path}};
    case Op::constant: return store::quantity(value, unit);
    case Op::path: {
      Json j = {{"path", path}};
      if (!unit.empty()) j["unit"] = unit;
      return j;
    }
    case Op::all:
    case Op::any: {
      Json args = Json::array();
      for (const auto& a : this->args) args.push_back(a.to_json());
      return {{"op", to_string(op)}, {"args", args}};
    }
    case Op::negate: return {{"op", "not"}, {"arg", args.at(0).to_json()}};
    default: return {{"op", to_string(op)}, {"lhs", args.at(0).to_json()}, {"rhs", args.at(1).to_json()}};
  }
}

Json CreditRule::to_json() const {
  Json j = {{"credit_id", credit_id},
            {"name", name},
            {"category", to_string(category)},
            {"kind", to_string(kind)},
            {"max_points", max_points},
            {"requirements", requirements.to_json()},
            {"prerequisites", prerequisites},
            {"required_inputs", required_inputs}};
  if (!description.empty()) j["description"] = description;
  if (metric) j["metric"] = metric->to_json();
  if (!point_table.empty()) {
    Json t = Json::array();
    for (const auto& row : point_table) t.push_back({{"threshold", store::quantity(row.threshold)}, {"points", row.points}});
    j["point_table"] = t;
  }
  return j;
}

void check_rule_set(const RuleSet& rules) {
  for (const auto& [id, r] : rules) {
    for (const auto& p : r.prerequisites) {
      auto it = rules.find(p);
      if (it == rules.end()) {
        throw Error(ErrorCode::validation, "rule " + id + " references unknown prerequisite " + p, {id, p});
      }
      if (it->second.kind != Kind::prerequisite) {
        throw Error(ErrorCode::validation, "rule " + id + " lists " + p + ", which is not a prerequisite", {id, p});
      }
    }
    for (size_t i = 0; i < r.point_table.size(); ++i) {
      const auto& row = r.point_table[i];
      if (row.points < 0 || row.points > r.max_points) {
        throw Error(ErrorCode::validation, "rule " + id + " point_table row " + std::to_string(i) +
                                               " awards more than max_points");
      }
      if (i > 0) {
        const auto& prev = r.point_table[i - 1];
        if (!units::compatible(prev.threshold.unit, row.threshold.unit) ||
            !(row.threshold.si() > prev.threshold.si())) {
          throw Error(ErrorCode::validation,
                      "rule " + id + " point_table thresholds must be strictly increasing");
        }
      }
    }
  }
}

RuleSet load_rules(std::string_view text, std::string_view source) {
  if (trim(std::string(text)).empty()) return {};
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw Error(ErrorCode::parse,
                std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": syntax error",
                {std::to_string(line), std::to_string(col)});
  }
  const Json* list = &doc;
  std::string base;
  if (doc.is_object()) {
    if (!doc.contains("rules")) fail(std::string(source), "expected a \"rules\" array");
    list = &doc["rules"];
    base = "/rules";
  }
  if (!list->is_array()) fail(std::string(source), "rules must be an array");
  RuleSet out;
  for (size_t i = 0; i < list->size(); ++i) {
    auto rule = parse_rule((*list)[i], std::string(source) + "#" + base + "/" + std::to_string(i));
    if (out.count(rule.credit_id)) {
      throw Error(ErrorCode::validation, "duplicate credit_id " + rule.credit_id, {rule.credit_id});
    }
    out.emplace(rule.credit_id, std::move(rule));
  }
  check_rule_set(out);
  return out;
}

RuleSet load_rules_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::not_found, "rules directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  RuleSet out;
  for (const auto& f : files) {
    const std::string text = read_file(f);
    const std::string name = f.filename().string();
    if (trim(text).empty()) continue;
    // Validate per file without the cross-file reference check, then jointly.
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error&) {
      load_rules(text, name);  // rethrows with line/column
    }
    const Json& list = doc.is_object() ? doc.value("rules", Json::array()) : doc;
    if (!list.is_array()) fail(name, "rules must be an array");
    for (size_t i = 0; i < list.size(); ++i) {
      auto rule = parse_rule(list[i], name + "#" + (doc.is_object() ? "/rules/" : "/") + std::to_string(i));
      if (out.count(rule.credit_id)) {
        throw Error(ErrorCode::validation, "duplicate credit_id " + rule.credit_id, {rule.credit_id});
      }
      out.emplace(rule.credit_id, std::move(rule));
    }
  }
  check_rule_set(out);
  return out;
}

}  // namespace leedw::credits
