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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "leedw/datastore/store.hpp"

namespace leedw::energymod {

inline constexpr int kHoursPerYear = 8760;

using DayProfile = std::array<double, 24>;

/// Day 0 of the year is a Monday. Holidays (0-based day of year) use the
/// Sunday profile.
struct WeeklyTemplate {
  DayProfile weekday{};
  DayProfile saturday{};
  DayProfile sunday{};
  std::set<int> holidays;
};

struct ScheduleSeries {
  std::vector<double> values;  // 8760 hourly fractions
  WeeklyTemplate pattern;

  double sum() const;
};

/// 52 full weeks, then the remaining day repeats the weekday profile.
ScheduleSeries expand_schedule(const WeeklyTemplate& pattern);

enum class SurfaceType { wall, roof, window, floor };

std::string_view to_string(SurfaceType t);

struct ZoneSpec {
  std::string name;
  double floor_area = 0.0;  // m2
};

struct SurfaceSpec {
  std::string name;
  std::string zone;
  SurfaceType type = SurfaceType::wall;
  std::string orientation;
  double area = 0.0;     // m2
  double u_value = 0.0;  // W/(m2.K)
};

struct HvacSpec {
  std::string system = "ideal_loads";
  double heating_efficiency = 1.0;
  double cooling_cop = 3.0;
};

struct InternalGains {
  double lighting = 0.0;   // W/m2
  double equipment = 0.0;  // W/m2
  double occupancy = 0.0;  // W/m2 sensible
};

struct BuildingModel {
  std::string name = "Building";
  std::vector<ZoneSpec> zones;
  std::vector<SurfaceSpec> envelope;
  HvacSpec hvac;
  InternalGains gains;
  std::map<std::string, ScheduleSeries> schedules;  // occupancy, lighting, equipment

  double floor_area() const;
  /// Sum of area x U over the envelope, W/K.
  double ua() const;
  double window_to_wall_ratio() const;
  /// Lighting and equipment fall back to the occupancy schedule.
  const ScheduleSeries& schedule_for(const std::string& use) const;

  /// Throws Error(validation) listing every out-of-range field.
  void validate() const;
};

/// Reads $.inputs.<key> (building or baseline_building). Missing fields raise
/// Error(missing_input) whose details are the store paths.
BuildingModel extract_building_model(const store::UnifiedStore& store, const std::string& key = "building");

struct Weather {
  double hdd = 0.0;  // K.d, base 18 C
  double cdd = 0.0;  // K.d
  std::string location;
  std::string file;  // optional weather file for the external engine
};

Weather extract_weather(const store::UnifiedStore& store);

}  // namespace leedw::energymod
