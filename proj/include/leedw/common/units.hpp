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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace leedw::units {

/// Exponents over the base dimensions length, mass, time, temperature, angle.
struct Dimension {
  std::array<int, 5> exp{};

  bool dimensionless() const;
  Dimension operator*(const Dimension& o) const;
  Dimension operator/(const Dimension& o) const;
  bool operator==(const Dimension&) const = default;
};

struct UnitInfo {
  double scale = 1.0;  // multiply a value in this unit by scale to get SI
  Dimension dim;
};

/// Parses UCUM-style unit strings such as "kWh/m2.yr", "W/(m2.K)", "m2",
/// "%" and "1". Everything after the first '/' is denominator. Accepts
/// the unicode spellings "m²" and "·". Returns nullopt for unknown atoms.
std::optional<UnitInfo> parse(std::string_view unit);

/// Like parse() but throws Error(validation) naming the unit.
UnitInfo require(std::string_view unit);

bool known(std::string_view unit);
bool compatible(std::string_view a, std::string_view b);

double to_si(double value, std::string_view unit);
double from_si(double value, std::string_view unit);
/// Throws Error(validation) when the dimensions differ.
double convert(double value, std::string_view from, std::string_view to);

/// ASCII-normalized spelling ("m²" -> "m2", "·" -> ".").
std::string normalize(std::string_view unit);

}  // namespace leedw::units

namespace leedw {

/// A numeric value with its unit tag.
struct Quantity {
  double value = 0.0;
  std::string unit = "1";

  double si() const { return units::to_si(value, unit); }
  bool operator==(const Quantity&) const = default;
};

}  // namespace leedw
