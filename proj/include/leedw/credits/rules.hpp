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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "leedw/common/units.hpp"
#include "leedw/datastore/store.hpp"

namespace leedw::credits {

enum class Category { LT, SS, WE, EA, MR, EQ, IN };
enum class Kind { prerequisite, credit };

std::string_view to_string(Category c);
std::string_view to_string(Kind k);
std::optional<Category> parse_category(std::string_view s);
/// Report ordering rank of a category (LT first, IN last).
int category_rank(Category c);

enum class Op {
  literal,   // boolean constant
  flag,      // boolean stored at a path
  lt, le, eq, ge, gt,
  all, any, negate,
  constant,  // number with unit
  path,      // quantity stored at a path
  add, sub, mul, div,
};

std::string_view to_string(Op op);
bool is_boolean(Op op);

struct Expr {
  Op op = Op::literal;
  bool truth = false;           // literal
  double value = 0.0;           // constant
  std::string unit = "1";       // constant; declared unit for path (may be empty)
  std::string path;             // flag, path
  std::vector<Expr> args;       // comparisons and arithmetic: {lhs, rhs}

  Json to_json() const;
};

struct PointRow {
  Quantity threshold;
  int points = 0;
};

struct CreditRule {
  std::string credit_id;
  std::string name;
  Category category = Category::LT;
  Kind kind = Kind::credit;
  int max_points = 0;
  Expr requirements;
  std::optional<Expr> metric;  // governs the point table
  std::vector<PointRow> point_table;
  std::set<std::string> prerequisites;
  std::set<std::string> required_inputs;
  std::string description;

  Json to_json() const;
};

using RuleSet = std::map<std::string, CreditRule>;

/// Parses a rules document: {"rules": [...]} or a bare array; blank text is
/// an empty set. Syntax errors carry "<source>:line:column"; semantic errors
/// name the JSON pointer of the offending node. Referential integrity of
/// prerequisites is checked within the document.
RuleSet load_rules(std::string_view text, std::string_view source = "<rules>");

/// Every *.json in the directory, in name order, checked together.
RuleSet load_rules_dir(const std::filesystem::path& dir);

/// Prerequisite references, point-table ordering and units. Throws
/// Error(validation).
void check_rule_set(const RuleSet& rules);

}  // namespace leedw::credits
