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
#include <optional>
#include <string>
#include <vector>

#include "leedw/datastore/store.hpp"

namespace leedw::reportgen {

/// A store value that generated text may quote. `{credit_id}` in the path is
/// replaced by the section's credit.
struct Alias {
  std::string path;
  std::string label;                  // phrase used when quoting the value
  std::vector<std::string> keywords;  // lowercase, singular
  std::vector<std::string> credits;   // credits whose sections quote it; empty = by evidence only
};

using AliasTable = std::vector<Alias>;

/// {"aliases": [{path, label, keywords, credits?}]}
AliasTable load_aliases(const std::filesystem::path& file);
AliasTable aliases_from_json(const Json& j);

struct NumericClaim {
  std::string text;  // number plus unit as written
  double value = 0;
  std::string unit = "1";
  size_t offset = 0;
  size_t length = 0;
};

/// Decimal numbers with optional thousands separators, sign and a trailing
/// unit (%, kWh, kWh/m2.yr, m², points ...). Digits inside identifiers such
/// as "EAc2" or "2026-10-15" are not claims.
std::vector<NumericClaim> extract_claims(const std::string& text);

/// Whole numbers as integers, other values below 1000 to four significant
/// figures, and from 1000 up rounded with thousands separators.
std::string format_claim_value(double v);

enum class Verdict { pass, mismatch, unmatched };

std::string_view to_string(Verdict v);

struct VerificationFinding {
  std::string claim_text;
  double value = 0;
  std::string unit;
  size_t offset = 0;
  std::string store_path;  // empty when unmatched
  std::optional<double> store_value;
  std::string store_unit;
  std::optional<double> relative_error;
  Verdict verdict = Verdict::unmatched;

  /// Numbers as quantities so the finding can live in the store.
  Json to_json() const;
  static VerificationFinding from_json(const Json& j);
};

inline constexpr double kDefaultTolerance = 0.005;
inline constexpr double kKeywordWindow = 8;

/// Matches each claim to the alias with a compatible unit and the most
/// keywords within the window (same sentence), ties by summed keyword
/// distance then table order. Pass iff |claim - store| / max(|store|, 1e-9)
/// <= tolerance.
std::vector<VerificationFinding> verify_numeric_claims(const std::string& text, const std::string& credit_id,
                                                       const store::UnifiedStore& store, const AliasTable& aliases,
                                                       double tolerance = kDefaultTolerance);

}  // namespace leedw::reportgen
