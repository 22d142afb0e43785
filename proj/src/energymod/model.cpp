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

#include "leedw/energymod/model.hpp"

#include <cmath>
#include <deque>
#include <numeric>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::energymod {

double ScheduleSeries::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

ScheduleSeries expand_schedule(const WeeklyTemplate& pattern) {
  ScheduleSeries s;
  s.pattern = pattern;
  s.values.reserve(kHoursPerYear);
  for (int day = 0; day < 365; ++day) {
    const DayProfile* p = &pattern.weekday;
    if (pattern.holidays.count(day)) {
      p = &pattern.sunday;
    } else if (day < 364) {
      const int dow = day % 7;  // 0 = Monday
      if (dow == 5) p = &pattern.saturday;
      if (dow == 6) p = &pattern.sunday;
    }
    s.values.insert(s.values.end(), p->begin(), p->end());
  }
  return s;
}

std::string_view to_string(SurfaceType t) {
  switch (t) {
    case SurfaceType::wall: return "wall";
    case SurfaceType::roof: return "roof";
    case SurfaceType::window: return "window";
    case SurfaceType::floor: return "floor";
  }
  return "wall";
}

double BuildingModel::floor_area() const {
  double a = 0;
  for (const auto& z : zones) a += z.floor_area;
  return a;
}

double BuildingModel::ua() const {
  double ua = 0;
  for (const auto& s : envelope) ua += s.area * s.u_value;
  return ua;
}

double BuildingModel::window_to_wall_ratio() const {
  double wall = 0, window = 0;
  for (const auto& s : envelope) {
    if (s.type == SurfaceType::wall) wall += s.area;
    if (s.type == SurfaceType::window) window += s.area;
  }
  return wall + window > 0 ? window / (wall + window) : 0.0;
}

const ScheduleSeries& BuildingModel::schedule_for(const std::string& use) const {
  auto it = schedules.find(use);
  if (it == schedules.end()) it = schedules.find("occupancy");
  if (it == schedules.end()) throw Error(ErrorCode::missing_input, "no schedule for " + use + " or occupancy");
  return it->second;
}

void BuildingModel::validate() const {
  std::vector<std::string> problems;
  if (zones.empty()) problems.push_back("model has no zones");
  for (const auto& z : zones) {
    if (!(z.floor_area > 0) || !std::isfinite(z.floor_area)) problems.push_back("zone " + z.name + ": floor area must be > 0");
  }
  for (const auto& s : envelope) {
    if (!(s.area > 0) || !std::isfinite(s.area)) problems.push_back("surface " + s.name + ": area must be > 0");
    if (!(s.u_value > 0) || !std::isfinite(s.u_value)) problems.push_back("surface " + s.name + ": U-value must be > 0");
  }
  if (!(hvac.heating_efficiency > 0 && hvac.heating_efficiency <= 1.5)) {
    problems.push_back("hvac: heating efficiency must be in (0, 1.5]");
  }
  if (!(hvac.cooling_cop > 0) || !std::isfinite(hvac.cooling_cop)) problems.push_back("hvac: cooling COP must be > 0");
  for (double g : {gains.lighting, gains.equipment, gains.occupancy}) {
    if (!(g >= 0) || !std::isfinite(g)) {
      problems.push_back("internal gains must be >= 0");
      break;
    }
  }
  const double wwr = window_to_wall_ratio();
  if (wwr < 0 || wwr > 1) problems.push_back("window-to-wall ratio outside [0, 1]");
  for (const auto& [name, s] : schedules) {
    if (s.values.size() != kHoursPerYear) problems.push_back("schedule " + name + ": must have 8760 values");
    for (double v : s.values) {
      if (!(v >= 0 && v <= 1)) {
        problems.push_back("schedule " + name + ": values must be in [0, 1]");
        break;
      }
    }
  }
  if (!problems.empty()) throw Error(ErrorCode::validation, "invalid building model: " + problems.front(), problems);
}

namespace {

// Collects missing paths and range problems while walking the inputs.
class Reader {
 public:
  explicit Reader(const store::UnifiedStore& store) : store_(store) {}

  const Json* node(const std::string& path) {
    auto hit = store::query_path(store_, path);
    if (!hit || hit->value.is_null()) {
      missing_.push_back(path);
      return nullptr;
    }
    held_.push_back(hit->value);
    return &held_.back();
  }

  std::optional<double> number(const std::string& path, const std::string& unit) {
    const Json* n = node(path);
    if (!n) return std::nullopt;
    auto q = store::as_quantity(*n);
    if (!q) {
      invalid_.push_back(path + ": expected a quantity in " + unit);
      return std::nullopt;
    }
    if (!units::compatible(q->unit, unit)) {
      invalid_.push_back(path + ": unit " + q->unit + " is not compatible with " + unit);
      return std::nullopt;
    }
    return units::convert(q->value, q->unit, unit);
  }

  std::string text(const std::string& path, std::string fallback = {}) {
    auto hit = store::query_path(store_, path);
    if (!hit || !hit->value.is_string()) return fallback;
    return hit->value.get<std::string>();
  }

  std::optional<DayProfile> profile(const std::string& path) {
    const Json* n = node(path);
    if (!n) return std::nullopt;
    if (!store::is_quantity(*n) || !(*n)["value"].is_array() || (*n)["value"].size() != 24) {
      invalid_.push_back(path + ": expected 24 hourly fractions");
      return std::nullopt;
    }
    DayProfile p{};
    for (size_t h = 0; h < 24; ++h) {
      p[h] = (*n)["value"][h].get<double>();
      if (!(p[h] >= 0 && p[h] <= 1)) invalid_.push_back(path + ": fractions must be in [0, 1]");
    }
    return p;
  }

  void invalid(std::string message) { invalid_.push_back(std::move(message)); }

  void finish() const {
    if (!missing_.empty()) {
      std::string list;
      for (const auto& p : missing_) list += (list.empty() ? "" : ", ") + p;
      throw Error(ErrorCode::missing_input, "missing building data: " + list, missing_);
    }
    if (!invalid_.empty()) throw Error(ErrorCode::validation, "invalid building data: " + invalid_.front(), invalid_);
  }

 private:
  const store::UnifiedStore& store_;
  std::vector<std::string> missing_;
  std::vector<std::string> invalid_;
  std::deque<Json> held_;
};

}  // namespace

BuildingModel extract_building_model(const store::UnifiedStore& store, const std::string& key) {
  const std::string base = "$.inputs." + key;
  Reader rd(store);
  BuildingModel m;
  m.name = rd.text(base + ".name", store.project().name);

  if (const Json* zones = rd.node(base + ".zones")) {
    if (!zones->is_array()) rd.invalid(base + ".zones: expected an array");
    for (size_t i = 0; zones->is_array() && i < zones->size(); ++i) {
      const std::string at = base + ".zones[" + std::to_string(i) + "]";
      ZoneSpec z;
      z.name = rd.text(at + ".name", "Zone" + std::to_string(i + 1));
      if (auto a = rd.number(at + ".floor_area", "m2")) {
        z.floor_area = *a;
        if (!(*a > 0)) rd.invalid(at + ".floor_area: must be > 0");
      }
      m.zones.push_back(z);
    }
  }
  if (const Json* env = rd.node(base + ".envelope")) {
    if (!env->is_array()) rd.invalid(base + ".envelope: expected an array");
    for (size_t i = 0; env->is_array() && i < env->size(); ++i) {
      const std::string at = base + ".envelope[" + std::to_string(i) + "]";
      SurfaceSpec s;
      s.name = rd.text(at + ".name", "Surface" + std::to_string(i + 1));
      s.zone = rd.text(at + ".zone", m.zones.empty() ? std::string() : m.zones.front().name);
      const std::string type = rd.text(at + ".type", "wall");
      if (type == "wall") s.type = SurfaceType::wall;
      else if (type == "roof") s.type = SurfaceType::roof;
      else if (type == "window") s.type = SurfaceType::window;
      else if (type == "floor") s.type = SurfaceType::floor;
      else rd.invalid(at + ".type: unknown surface type " + type);
      s.orientation = rd.text(at + ".orientation");
      if (auto a = rd.number(at + ".area", "m2")) {
        s.area = *a;
        if (!(*a > 0)) rd.invalid(at + ".area: must be > 0");
      }
      if (auto u = rd.number(at + ".u_value", "W/(m2.K)")) {
        s.u_value = *u;
        if (!(*u > 0)) rd.invalid(at + ".u_value: must be > 0");
      }
      m.envelope.push_back(s);
    }
  }
  m.hvac.system = rd.text(base + ".hvac.system", "ideal_loads");
  if (auto eta = rd.number(base + ".hvac.heating_efficiency", "1")) {
    m.hvac.heating_efficiency = *eta;
    if (!(*eta > 0 && *eta <= 1.5)) rd.invalid(base + ".hvac.heating_efficiency: must be in (0, 1.5]");
  }
  if (auto cop = rd.number(base + ".hvac.cooling_cop", "1")) {
    m.hvac.cooling_cop = *cop;
    if (!(*cop > 0)) rd.invalid(base + ".hvac.cooling_cop: must be > 0");
  }
  for (auto [field, target] : {std::pair{"lighting", &m.gains.lighting}, std::pair{"equipment", &m.gains.equipment},
                               std::pair{"occupancy", &m.gains.occupancy}}) {
    if (auto g = rd.number(base + ".internal_gains." + field, "W/m2")) {
      *target = *g;
      if (!(*g >= 0)) rd.invalid(base + ".internal_gains." + field + ": must be >= 0");
    }
  }
  if (const Json* scheds = rd.node(base + ".schedules")) {
    if (!scheds->is_object() || !scheds->contains("occupancy")) {
      rd.node(base + ".schedules.occupancy");  // records it as missing
    }
    for (auto it = scheds->begin(); scheds->is_object() && it != scheds->end(); ++it) {
      const std::string at = base + ".schedules." + it.key();
      WeeklyTemplate t;
      auto wd = rd.profile(at + ".weekday");
      auto sa = rd.profile(at + ".saturday");
      auto su = rd.profile(at + ".sunday");
      if (!wd || !sa || !su) continue;
      t.weekday = *wd;
      t.saturday = *sa;
      t.sunday = *su;
      if (it->contains("holidays")) {
        const Json& h = (*it)["holidays"];
        if (store::is_quantity(h) && h["value"].is_array()) {
          for (const auto& d : h["value"]) {
            const int day = static_cast<int>(d.get<double>());
            if (day < 0 || day >= 365) rd.invalid(at + ".holidays: day outside [0, 364]");
            t.holidays.insert(day);
          }
        } else {
          rd.invalid(at + ".holidays: expected a quantity array of day indices");
        }
      }
      m.schedules[it.key()] = expand_schedule(t);
    }
  }
  rd.finish();
  m.validate();
  return m;
}

Weather extract_weather(const store::UnifiedStore& store) {
  Reader rd(store);
  Weather w;
  if (auto h = rd.number("$.inputs.weather.hdd", "K.d")) w.hdd = *h;
  if (auto c = rd.number("$.inputs.weather.cdd", "K.d")) w.cdd = *c;
  w.location = rd.text("$.inputs.weather.location");
  w.file = rd.text("$.inputs.weather.file");
  rd.finish();
  if (!(w.hdd >= 0) || !(w.cdd >= 0)) throw Error(ErrorCode::validation, "degree-days must be >= 0");
  return w;
}

}  // namespace leedw::energymod
