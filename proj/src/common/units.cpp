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

#include "leedw/common/units.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

#include "leedw/common/error.hpp"

namespace leedw::units {

namespace {

constexpr int kL = 0, kM = 1, kT = 2, kK = 3, kA = 4;

Dimension dim(int l, int m, int t, int k = 0, int a = 0) {
  Dimension d;
  d.exp[kL] = l;
  d.exp[kM] = m;
  d.exp[kT] = t;
  d.exp[kK] = k;
  d.exp[kA] = a;
  return d;
}

const std::map<std::string, UnitInfo, std::less<>>& atoms() {
  static const std::map<std::string, UnitInfo, std::less<>> table = [] {
    const Dimension length = dim(1, 0, 0);
    const Dimension mass = dim(0, 1, 0);
    const Dimension time = dim(0, 0, 1);
    const Dimension energy = dim(2, 1, -2);
    const Dimension power = dim(2, 1, -3);
    const Dimension volume = dim(3, 0, 0);
    const double year = 365.0 * 86400.0;
    std::map<std::string, UnitInfo, std::less<>> t;
    t["1"] = {1.0, {}};
    t["%"] = {0.01, {}};
    t["m"] = {1.0, length};
    t["km"] = {1000.0, length};
    t["cm"] = {0.01, length};
    t["mm"] = {0.001, length};
    t["ft"] = {0.3048, length};
    t["in"] = {0.0254, length};
    t["mi"] = {1609.344, length};
    t["g"] = {1e-3, mass};
    t["kg"] = {1.0, mass};
    t["t"] = {1000.0, mass};
    t["lb"] = {0.45359237, mass};
    t["s"] = {1.0, time};
    t["min"] = {60.0, time};
    t["h"] = {3600.0, time};
    t["d"] = {86400.0, time};
    t["wk"] = {7 * 86400.0, time};
    t["yr"] = {year, time};
    t["a"] = {year, time};
    t["K"] = {1.0, dim(0, 0, 0, 1)};
    t["J"] = {1.0, energy};
    t["kJ"] = {1e3, energy};
    t["MJ"] = {1e6, energy};
    t["GJ"] = {1e9, energy};
    t["Wh"] = {3600.0, energy};
    t["kWh"] = {3.6e6, energy};
    t["MWh"] = {3.6e9, energy};
    t["Btu"] = {1055.05585262, energy};
    t["kBtu"] = {1055055.85262, energy};
    t["W"] = {1.0, power};
    t["kW"] = {1e3, power};
    t["MW"] = {1e6, power};
    t["L"] = {1e-3, volume};
    t["gal"] = {3.785411784e-3, volume};
    t["deg"] = {std::numbers::pi / 180.0, dim(0, 0, 0, 0, 1)};
    t["rad"] = {1.0, dim(0, 0, 0, 0, 1)};
    return t;
  }();
  return table;
}

// Parses a run of atoms separated by '.' (or juxtaposed after an exponent,
// as in "m2K"). Returns false on any unknown atom.
bool parse_product(std::string_view s, UnitInfo& out) {
  out = UnitInfo{};
  size_t i = 0;
  if (s.empty()) return false;
  while (i < s.size()) {
    if (s[i] == '.') {
      ++i;
      continue;
    }
    size_t start = i;
    if (s[i] == '%') {
      ++i;
    } else if (s[i] == '1' && (i + 1 == s.size() || s[i + 1] == '.')) {
      ++i;
    } else {
      while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    }
    if (i == start) return false;
    std::string_view name = s.substr(start, i - start);
    int power = 1;
    size_t exp_start = i;
    if (i < s.size() && (s[i] == '-' || std::isdigit(static_cast<unsigned char>(s[i])))) {
      if (s[i] == '-') ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      std::string_view digits = s.substr(exp_start, i - exp_start);
      if (digits == "-") return false;
      power = std::stoi(std::string(digits));
    }
    auto it = atoms().find(name);
    if (it == atoms().end()) return false;
    for (int p = 0; p < std::abs(power); ++p) {
      if (power > 0) {
        out.scale *= it->second.scale;
        out.dim = out.dim * it->second.dim;
      } else {
        out.scale /= it->second.scale;
        out.dim = out.dim / it->second.dim;
      }
    }
  }
  return true;
}

std::string strip_parens(std::string_view s) {
  std::string r;
  for (char c : s) {
    if (c != '(' && c != ')') r.push_back(c);
  }
  return r;
}

}  // namespace

bool Dimension::dimensionless() const {
  for (int e : exp) {
    if (e != 0) return false;
  }
  return true;
}

Dimension Dimension::operator*(const Dimension& o) const {
  Dimension r;
  for (size_t i = 0; i < exp.size(); ++i) r.exp[i] = exp[i] + o.exp[i];
  return r;
}

Dimension Dimension::operator/(const Dimension& o) const {
  Dimension r;
  for (size_t i = 0; i < exp.size(); ++i) r.exp[i] = exp[i] - o.exp[i];
  return r;
}

std::string normalize(std::string_view unit) {
  std::string out;
  for (size_t i = 0; i < unit.size(); ++i) {
    auto c = static_cast<unsigned char>(unit[i]);
    if (c == 0xC2 && i + 1 < unit.size()) {
      auto n = static_cast<unsigned char>(unit[i + 1]);
      if (n == 0xB2) { out += '2'; ++i; continue; }   // ²
      if (n == 0xB3) { out += '3'; ++i; continue; }   // ³
      if (n == 0xB7) { out += '.'; ++i; continue; }   // ·
      if (n == 0xB0) { out += "deg"; ++i; continue; } // °
    }
    if (c == ' ') continue;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::optional<UnitInfo> parse(std::string_view unit) {
  const std::string s = normalize(unit);
  if (s.empty()) return std::nullopt;
  const auto slash = s.find('/');
  UnitInfo num;
  if (!parse_product(s.substr(0, slash), num)) return std::nullopt;
  if (slash == std::string::npos) return num;
  std::string denom = strip_parens(std::string_view(s).substr(slash + 1));
  for (char& c : denom) {
    if (c == '/') c = '.';
  }
  UnitInfo den;
  if (!parse_product(denom, den)) return std::nullopt;
  return UnitInfo{num.scale / den.scale, num.dim / den.dim};
}

UnitInfo require(std::string_view unit) {
  auto info = parse(unit);
  if (!info) {
    throw Error(ErrorCode::validation, "unknown unit '" + std::string(unit) + "'");
  }
  return *info;
}

bool known(std::string_view unit) { return parse(unit).has_value(); }

bool compatible(std::string_view a, std::string_view b) {
  auto ia = parse(a);
  auto ib = parse(b);
  return ia && ib && ia->dim == ib->dim;
}

double to_si(double value, std::string_view unit) { return value * require(unit).scale; }

double from_si(double value, std::string_view unit) { return value / require(unit).scale; }

double convert(double value, std::string_view from, std::string_view to) {
  const UnitInfo f = require(from);
  const UnitInfo t = require(to);
  if (!(f.dim == t.dim)) {
    throw Error(ErrorCode::validation,
                "incompatible units '" + std::string(from) + "' and '" + std::string(to) + "'");
  }
  return value * f.scale / t.scale;
}

}  // namespace leedw::units
