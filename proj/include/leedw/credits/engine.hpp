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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "leedw/credits/rules.hpp"

namespace leedw::credits {

enum class Tri { false_, true_, unknown };

std::string_view to_string(Tri t);
Tri tri_and(Tri a, Tri b);
Tri tri_or(Tri a, Tri b);
Tri tri_not(Tri a);

struct ExprResult {
  Tri value = Tri::unknown;
  std::set<std::string> used_paths;
  std::set<std::string> missing_paths;
};

/// Strong Kleene evaluation. Missing paths make their comparison unknown;
/// division by zero is unknown. Unit mismatches throw Error(evaluation).
ExprResult evaluate_expr(const Expr& expr, const store::UnifiedStore& store);

struct NumericResult {
  std::optional<double> si;  // nullopt when unknown
  units::Dimension dim;
  std::set<std::string> used_paths;
  std::set<std::string> missing_paths;
};

NumericResult evaluate_number(const Expr& expr, const store::UnifiedStore& store);

enum class Status { achieved, not_achieved, indeterminate, blocked };

std::string_view to_string(Status s);

struct ComplianceResult {
  std::string credit_id;
  Status status = Status::indeterminate;
  int awarded_points = 0;
  std::optional<double> metric;  // in metric_unit
  std::string metric_unit;
  std::vector<store::EvidenceRef> evidence;
  std::set<std::string> missing_inputs;
  std::vector<std::string> blocked_by;

  Json to_json() const;
};

/// Points for a metric: the largest row whose threshold <= metric (0 if none),
/// capped at max_points.
int lookup_points(const CreditRule& rule, double metric_si);

ComplianceResult evaluate_credit(const CreditRule& rule, const store::UnifiedStore& store,
                                 const std::map<std::string, ComplianceResult>& prereq_results);

struct Scorecard {
  std::map<std::string, ComplianceResult> results;
  int total_points = 0;
  int max_points = 0;  // sum over targeted credits
  int targeted = 0;    // rules of kind credit
  int automated = 0;   // targeted credits not indeterminate

  double coverage() const;
  /// Half-up whole percent.
  int coverage_percent() const;
  Json to_json() const;
};

/// Integer half-up rounding of 100 * automated / targeted.
int coverage_percent(int automated, int targeted);

/// Prerequisites first. A prerequisite cycle throws Error(configuration).
std::vector<std::string> evaluation_order(const RuleSet& rules);
Scorecard evaluate_all(const RuleSet& rules, const store::UnifiedStore& store);

enum class GapType { shortfall, missing_data, blocked };

std::string_view to_string(GapType t);

struct Gap {
  std::string credit_id;
  GapType type = GapType::shortfall;
  std::string detail;
  std::optional<double> distance;  // to the next threshold, in its unit
  std::string unit;
  std::vector<std::string> missing_paths;

  Json to_json() const;
};

std::vector<Gap> identify_gaps(const Scorecard& scorecard, const RuleSet& rules, const store::UnifiedStore& store);

/// The results subtree written under $.results.credits.
Json credits_results(const RuleSet& rules, const store::UnifiedStore& store);

}  // namespace leedw::credits
