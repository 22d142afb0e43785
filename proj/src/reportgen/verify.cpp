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

#include "leedw/reportgen/verify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::reportgen {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Unit atoms that are also common English words.
const std::set<std::string>& unit_stoplist() {
  static const std::set<std::string> s = {"in", "a", "t", "s", "h", "d", "g", "mi", "min", "K"};
  return s;
}

std::optional<std::string> count_word_unit(const std::string& w) {
  static const std::set<std::string> counts = {"point", "points", "trip", "trips", "category", "categories",
                                               "stop", "stops", "credit", "credits"};
  const std::string lw = to_lower(w);
  if (counts.count(lw)) return std::string("1");
  if (lw == "percent") return std::string("%");
  return std::nullopt;
}

std::optional<std::string> as_unit(std::string token, bool attached) {
  while (!token.empty() && std::string(".,;:)!?").find(token.back()) != std::string::npos) token.pop_back();
  if (token.empty()) return std::nullopt;
  if (auto w = count_word_unit(token)) return w;
  if (!attached && unit_stoplist().count(token)) return std::nullopt;
  if (!units::known(token)) return std::nullopt;
  return units::normalize(token);
}

struct Token {
  std::string word;  // lowercased
  size_t offset;
  int sentence;
};

std::vector<Token> word_tokens(const std::string& text) {
  std::vector<Token> out;
  int sentence = 0;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?' || c == ';') && (i + 1 == text.size() || is_space(text[i + 1]))) ++sentence;
    if (c == '\n' && i + 1 < text.size() && text[i + 1] == '\n') ++sentence;
    if (is_alnum(c)) {
      size_t j = i;
      while (j < text.size() && is_alnum(text[j])) ++j;
      out.push_back({to_lower(text.substr(i, j - i)), i, sentence});
      i = j;
      continue;
    }
    ++i;
  }
  return out;
}

bool keyword_hit(const std::string& token, const std::string& keyword) {
  if (token == keyword) return true;
  return token.size() == keyword.size() + 1 && token.back() == 's' && token.compare(0, keyword.size(), keyword) == 0;
}

std::string substitute(std::string path, const std::string& credit_id) {
  const std::string key = "{credit_id}";
  for (size_t p = path.find(key); p != std::string::npos; p = path.find(key)) path.replace(p, key.size(), credit_id);
  return path;
}

}  // namespace

AliasTable aliases_from_json(const Json& j) {
  AliasTable out;
  try {
    for (const auto& a : j.at("aliases")) {
      Alias al;
      al.path = a.at("path").get<std::string>();
      al.label = a.at("label").get<std::string>();
      for (const auto& k : a.at("keywords")) al.keywords.push_back(to_lower(k.get<std::string>()));
      for (const auto& c : a.value("credits", Json::array())) al.credits.push_back(c.get<std::string>());
      out.push_back(std::move(al));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("malformed alias table: ") + e.what());
  }
  return out;
}

AliasTable load_aliases(const std::filesystem::path& file) {
  try {
    return aliases_from_json(Json::parse(read_file(file)));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse, file.string() + ": " + e.what());
  }
}

std::vector<NumericClaim> extract_claims(const std::string& text) {
  std::vector<NumericClaim> out;
  const size_t n = text.size();
  size_t i = 0;
  auto skip_word = [&](size_t from) {
    size_t j = from;
    while (j < n && (is_alnum(text[j]) || text[j] == '.' || text[j] == '-' || text[j] == '_' || text[j] == ',') &&
           !(text[j] == '.' && (j + 1 == n || is_space(text[j + 1])))) {
      ++j;
    }
    return std::max(j, from + 1);
  };
  while (i < n) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    size_t start = i;
    if (i > 0) {
      const char p = text[i - 1];
      if (is_alnum(p) || p == '_' || p == '.' || p == '#' || p == '/' || p == ':' || p == ',') {
        i = skip_word(i);
        continue;
      }
      if (p == '-' || p == '+') {
        if (i >= 2 && (is_alnum(text[i - 2]) || text[i - 2] == '-')) {
          i = skip_word(i);
          continue;
        }
        start = i - 1;
      }
    }
    // integer part with optional thousands groups
    size_t j = i;
    while (j < n && is_digit(text[j])) ++j;
    std::string digits = text.substr(i, j - i);
    if (digits.size() <= 3) {
      while (j + 3 < n && text[j] == ',' && is_digit(text[j + 1]) && is_digit(text[j + 2]) && is_digit(text[j + 3]) &&
             (j + 4 >= n || !is_digit(text[j + 4]))) {
        digits += text.substr(j + 1, 3);
        j += 4;
      }
    }
    if (j + 1 < n && text[j] == '.' && is_digit(text[j + 1])) {
      size_t k = j + 1;
      while (k < n && is_digit(text[k])) ++k;
      digits += text.substr(j, k - j);
      j = k;
    }
    // identifiers and dates: "3rd", "2026-10-15", "1.2.3"
    if (j < n && (text[j] == '-' || text[j] == '_') && j + 1 < n && is_alnum(text[j + 1])) {
      i = skip_word(j);
      continue;
    }
    if (j + 1 < n && text[j] == '.' && is_digit(text[j + 1])) {
      i = skip_word(j);
      continue;
    }
    NumericClaim c;
    c.offset = start;
    c.value = std::stod(digits);
    if (text[start] == '-') c.value = -c.value;
    size_t end = j;
    if (j < n && text[j] == '%') {
      c.unit = "%";
      end = j + 1;
    } else if (j < n && is_alnum(text[j])) {
      size_t k = j;
      while (k < n && !is_space(text[k])) ++k;
      auto u = as_unit(text.substr(j, k - j), true);
      if (!u) {
        i = skip_word(j);
        continue;
      }
      c.unit = *u;
      end = k;
      while (end > j && std::string(".,;:)!?").find(text[end - 1]) != std::string::npos) --end;
    } else if (j + 1 < n && text[j] == ' ' && !is_space(text[j + 1])) {
      size_t k = j + 1;
      while (k < n && !is_space(text[k])) ++k;
      if (auto u = as_unit(text.substr(j + 1, k - j - 1), false)) {
        c.unit = *u;
        end = k;
        while (end > j + 1 && std::string(".,;:)!?").find(text[end - 1]) != std::string::npos) --end;
      }
    }
    c.length = end - start;
    c.text = text.substr(start, c.length);
    out.push_back(std::move(c));
    i = end;
  }
  return out;
}

std::string format_claim_value(double v) {
  char buf[64];
  if (std::abs(v) >= 1000) {
    std::snprintf(buf, sizeof buf, "%.0f", std::abs(v));
    std::string d = buf, out;
    for (size_t k = 0; k < d.size(); ++k) {
      if (k > 0 && (d.size() - k) % 3 == 0) out += ',';
      out += d[k];
    }
    return (v < 0 ? "-" : "") + out;
  }
  if (v == std::round(v)) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  const int mag = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const int decimals = std::max(0, 3 - mag);
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::mismatch: return "mismatch";
    case Verdict::unmatched: return "unmatched";
  }
  return "unmatched";
}

Json VerificationFinding::to_json() const {
  Json j = {{"claim_text", claim_text},
            {"claim", store::quantity(value, unit)},
            {"offset", store::quantity(static_cast<double>(offset), "1")},
            {"store_path", store_path},
            {"verdict", to_string(verdict)}};
  if (store_value) j["store_value"] = store::quantity(*store_value, store_unit);
  if (relative_error) j["relative_error"] = store::quantity(*relative_error, "1");
  return j;
}

VerificationFinding VerificationFinding::from_json(const Json& j) {
  VerificationFinding f;
  try {
    f.claim_text = j.at("claim_text").get<std::string>();
    f.value = j.at("claim").at("value").get<double>();
    f.unit = j.at("claim").at("unit").get<std::string>();
    f.offset = static_cast<size_t>(j.at("offset").at("value").get<double>());
    f.store_path = j.value("store_path", "");
    if (j.contains("store_value")) {
      f.store_value = j["store_value"].at("value").get<double>();
      f.store_unit = j["store_value"].at("unit").get<std::string>();
    }
    if (j.contains("relative_error")) f.relative_error = j["relative_error"].at("value").get<double>();
    const std::string v = j.at("verdict").get<std::string>();
    f.verdict = v == "pass" ? Verdict::pass : v == "mismatch" ? Verdict::mismatch : Verdict::unmatched;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("malformed verification finding: ") + e.what());
  }
  return f;
}

std::vector<VerificationFinding> verify_numeric_claims(const std::string& text, const std::string& credit_id,
                                                       const store::UnifiedStore& store, const AliasTable& aliases,
                                                       double tolerance) {
  if (!(tolerance > 0)) throw Error(ErrorCode::parameter, "tolerance must be > 0");
  struct Resolved {
    const Alias* alias;
    std::string path;
    Quantity q;
  };
  std::vector<Resolved> resolved;
  for (const auto& a : aliases) {
    const std::string path = substitute(a.path, credit_id);
    auto hit = store::query_path(store, path);
    if (hit && hit->quantity) resolved.push_back({&a, path, *hit->quantity});
  }
  const auto tokens = word_tokens(text);
  std::vector<VerificationFinding> out;
  for (const auto& c : extract_claims(text)) {
    VerificationFinding f;
    f.claim_text = c.text;
    f.value = c.value;
    f.unit = c.unit;
    f.offset = c.offset;
    // token index of the claim and its sentence
    size_t ti = 0;
    while (ti < tokens.size() && tokens[ti].offset < c.offset) ++ti;
    const int sentence = ti < tokens.size() ? tokens[ti].sentence : (tokens.empty() ? 0 : tokens.back().sentence);
    const long lo = static_cast<long>(ti) - static_cast<long>(kKeywordWindow);
    const long hi = static_cast<long>(ti) + static_cast<long>(kKeywordWindow);

    const Resolved* best = nullptr;
    int best_hits = 0;
    long best_dist = 0;
    for (const auto& r : resolved) {
      if (!units::compatible(c.unit, r.q.unit)) continue;
      int hits = 0;
      long dist = 0;
      for (const auto& kw : r.alias->keywords) {
        long nearest = -1;
        for (long t = std::max(0L, lo); t <= hi && t < static_cast<long>(tokens.size()); ++t) {
          if (tokens[t].sentence != sentence || tokens[t].offset >= c.offset && tokens[t].offset < c.offset + c.length) continue;
          if (keyword_hit(tokens[t].word, kw)) {
            const long d = std::abs(t - static_cast<long>(ti));
            if (nearest < 0 || d < nearest) nearest = d;
          }
        }
        if (nearest >= 0) {
          ++hits;
          dist += nearest;
        }
      }
      if (hits > best_hits || (hits == best_hits && hits > 0 && dist < best_dist)) {
        best = &r;
        best_hits = hits;
        best_dist = dist;
      }
    }
    if (best) {
      f.store_path = best->path;
      f.store_value = best->q.value;
      f.store_unit = best->q.unit;
      const double claim = units::convert(c.value, c.unit, best->q.unit);
      f.relative_error = std::abs(claim - best->q.value) / std::max(std::abs(best->q.value), 1e-9);
      f.verdict = *f.relative_error <= tolerance ? Verdict::pass : Verdict::mismatch;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace leedw::reportgen
