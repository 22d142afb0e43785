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

#include "leedw/energymod/idf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::energymod {

namespace {

const std::map<std::string, std::vector<std::string>, std::less<>>& schema() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> s = {
      {"Version", {"Version Identifier"}},
      {"Building",
       {"Name", "North Axis {deg}", "Terrain", "Loads Convergence Tolerance Value {W}",
        "Temperature Convergence Tolerance Value {deltaC}", "Solar Distribution", "Maximum Number of Warmup Days",
        "Minimum Number of Warmup Days"}},
      {"ScheduleTypeLimits", {"Name", "Lower Limit Value", "Upper Limit Value", "Numeric Type"}},
      {"Schedule:Compact", {"Name", "Schedule Type Limits Name"}},
      {"Material:NoMass",
       {"Name", "Roughness", "Thermal Resistance {m2-K/W}", "Thermal Absorptance", "Solar Absorptance",
        "Visible Absorptance"}},
      {"Construction", {"Name", "Outside Layer"}},
      {"Zone",
       {"Name", "Direction of Relative North {deg}", "X Origin {m}", "Y Origin {m}", "Z Origin {m}", "Type",
        "Multiplier", "Ceiling Height {m}", "Volume {m3}", "Floor Area {m2}"}},
      {"BuildingSurface:Detailed",
       {"Name", "Surface Type", "Construction Name", "Zone Name", "Outside Boundary Condition", "Sun Exposure",
        "Wind Exposure", "Orientation", "Gross Area {m2}"}},
      {"People",
       {"Name", "Zone or ZoneList Name", "Number of People Schedule Name", "Number of People Calculation Method",
        "Number of People", "People per Zone Floor Area {person/m2}", "Zone Floor Area per Person {m2/person}",
        "Fraction Radiant", "Sensible Heat Fraction", "Activity Level Schedule Name"}},
      {"Lights",
       {"Name", "Zone or ZoneList Name", "Schedule Name", "Design Level Calculation Method", "Lighting Level {W}",
        "Watts per Zone Floor Area {W/m2}"}},
      {"ElectricEquipment",
       {"Name", "Zone or ZoneList Name", "Schedule Name", "Design Level Calculation Method", "Design Level {W}",
        "Watts per Zone Floor Area {W/m2}"}},
      {"HVACTemplate:Thermostat",
       {"Name", "Heating Setpoint Schedule Name", "Constant Heating Setpoint {C}", "Cooling Setpoint Schedule Name",
        "Constant Cooling Setpoint {C}"}},
      {"HVACTemplate:Zone:IdealLoadsAirSystem", {"Zone Name", "Template Thermostat Name"}},
      {"HVACTemplate:Plant:Boiler", {"Name", "Boiler Type", "Capacity {W}", "Efficiency", "Fuel Type"}},
      {"HVACTemplate:Plant:Chiller", {"Name", "Chiller Type", "Capacity {W}", "Nominal COP {W/W}", "Condenser Type"}},
  };
  return s;
}

int class_rank(std::string_view cls) {
  static const std::vector<std::string_view> order = {
      "Version", "Building", "ScheduleTypeLimits", "Schedule:Compact", "Material:NoMass", "Construction", "Zone",
      "BuildingSurface:Detailed", "People", "Lights", "ElectricEquipment", "HVACTemplate:Thermostat",
      "HVACTemplate:Zone:IdealLoadsAirSystem", "HVACTemplate:Plant:Boiler", "HVACTemplate:Plant:Chiller"};
  auto it = std::find(order.begin(), order.end(), cls);
  return it == order.end() ? static_cast<int>(order.size()) : static_cast<int>(it - order.begin());
}

std::string num(double v) { return format_number(v); }

std::string two_digit(int h) { return (h < 10 ? "0" : "") + std::to_string(h); }

// "Until: HH:00, value" pairs for one day, merging equal consecutive hours.
void append_day(std::vector<std::string>& f, const DayProfile& day) {
  for (int h = 0; h < 24; ++h) {
    if (h + 1 < 24 && day[h + 1] == day[h]) continue;
    f.push_back("Until: " + two_digit(h + 1) + ":00");
    f.push_back(num(day[h]));
  }
}

IdfObject compact_schedule(const std::string& name, const WeeklyTemplate& t) {
  IdfObject o{"Schedule:Compact", {name, "Fraction", "Through: 12/31", "For: Weekdays SummerDesignDay WinterDesignDay"}};
  append_day(o.fields, t.weekday);
  o.fields.push_back("For: Saturday");
  append_day(o.fields, t.saturday);
  o.fields.push_back("For: Sunday Holidays AllOtherDays");
  append_day(o.fields, t.sunday);
  return o;
}

std::string surface_type(SurfaceType t) {
  switch (t) {
    case SurfaceType::wall: return "Wall";
    case SurfaceType::roof: return "Roof";
    case SurfaceType::window: return "Window";
    case SurfaceType::floor: return "Floor";
  }
  return "Wall";
}

void sort_document(IdfDocument& doc) {
  std::stable_sort(doc.objects.begin(), doc.objects.end(), [](const IdfObject& a, const IdfObject& b) {
    const int ra = class_rank(a.cls), rb = class_rank(b.cls);
    if (ra != rb) return ra < rb;
    if (a.cls != b.cls) return a.cls < b.cls;
    return a.name() < b.name();
  });
}

}  // namespace

std::string IdfObject::name() const { return cls == "Version" || fields.empty() ? std::string() : fields.front(); }

std::optional<double> IdfObject::number(size_t i) const {
  if (i >= fields.size()) return std::nullopt;
  const std::string& s = fields[i];
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<const IdfObject*> IdfDocument::of_class(std::string_view cls) const {
  std::vector<const IdfObject*> out;
  for (const auto& o : objects) {
    if (o.cls == cls) out.push_back(&o);
  }
  return out;
}

const IdfObject* IdfDocument::find(std::string_view cls, std::string_view name) const {
  for (const auto& o : objects) {
    if (o.cls == cls && to_lower(o.name()) == to_lower(std::string(name))) return &o;
  }
  return nullptr;
}

const std::vector<std::string>& field_names(std::string_view cls) {
  static const std::vector<std::string> none;
  auto it = schema().find(cls);
  return it == schema().end() ? none : it->second;
}

IdfDocument emit_idf(const BuildingModel& model) {
  if (model.zones.empty()) throw Error(ErrorCode::validation, "cannot emit an empty model: no zones");
  if (!model.schedules.count("occupancy")) throw Error(ErrorCode::missing_input, "cannot emit a model without an occupancy schedule");
  IdfDocument doc;
  auto add = [&](std::string cls, std::vector<std::string> fields) { doc.objects.push_back({std::move(cls), std::move(fields)}); };
  add("Version", {"9.6"});
  add("Building", {model.name, "0", "City", "0.04", "0.4", "FullExterior", "25", "6"});
  add("ScheduleTypeLimits", {"Fraction", "0", "1", "Continuous"});
  add("ScheduleTypeLimits", {"Any Number", "", "", "Continuous"});

  for (const auto& [use, series] : model.schedules) doc.objects.push_back(compact_schedule("Sch_" + use, series.pattern));
  add("Schedule:Compact", {"Sch_activity", "Any Number", "Through: 12/31", "For: AllDays", "Until: 24:00", "120"});

  for (const auto& s : model.envelope) {
    add("Material:NoMass", {s.name + "_Mat", "MediumRough", num(1.0 / s.u_value), "0.9", "0.7", "0.7"});
    add("Construction", {s.name + "_Con", s.name + "_Mat"});
    const bool ground = s.type == SurfaceType::floor;
    add("BuildingSurface:Detailed", {s.name, surface_type(s.type), s.name + "_Con", s.zone, ground ? "Ground" : "Outdoors",
                                     ground ? "NoSun" : "SunExposed", ground ? "NoWind" : "WindExposed", s.orientation,
                                     num(s.area)});
  }
  const std::string occ = "Sch_occupancy";
  const std::string lights = model.schedules.count("lighting") ? "Sch_lighting" : occ;
  const std::string equip = model.schedules.count("equipment") ? "Sch_equipment" : occ;
  for (const auto& z : model.zones) {
    add("Zone", {z.name, "0", "0", "0", "0", "1", "1", "autocalculate", "autocalculate", num(z.floor_area)});
    add("People", {z.name + "_People", z.name, occ, "People/Area", "", num(model.gains.occupancy / 120.0), "", "0.3",
                   "autocalculate", "Sch_activity"});
    add("Lights", {z.name + "_Lights", z.name, lights, "Watts/Area", "", num(model.gains.lighting)});
    add("ElectricEquipment", {z.name + "_Equipment", z.name, equip, "Watts/Area", "", num(model.gains.equipment)});
    add("HVACTemplate:Zone:IdealLoadsAirSystem", {z.name, "Thermostat"});
  }
  add("HVACTemplate:Thermostat", {"Thermostat", "", "21", "", "24"});
  add("HVACTemplate:Plant:Boiler", {"Boiler", "HotWaterBoiler", "autosize", num(model.hvac.heating_efficiency), "NaturalGas"});
  add("HVACTemplate:Plant:Chiller", {"Chiller", "ElectricReformulatedEIR", "autosize", num(model.hvac.cooling_cop), "AirCooled"});
  sort_document(doc);
  return doc;
}

std::string serialize_idf(const IdfDocument& doc) {
  std::string out = "!- Simulation input generated by leedw energymod\n";
  for (const auto& o : doc.objects) {
    out += "\n" + o.cls + (o.fields.empty() ? ";\n" : ",\n");
    const auto& names = field_names(o.cls);
    for (size_t i = 0; i < o.fields.size(); ++i) {
      std::string cell = "    " + o.fields[i] + (i + 1 == o.fields.size() ? ";" : ",");
      if (cell.size() < 29) cell.resize(29, ' ');
      else cell += ' ';
      std::string label = i < names.size() ? names[i] : "Field " + std::to_string(i + 1 - names.size());
      out += cell + "!- " + label + "\n";
    }
  }
  return out;
}

IdfDocument parse_idf(std::string_view text) {
  IdfDocument doc;
  std::vector<std::string> tokens;
  std::string cur;
  bool in_object = false;
  size_t line = 1;
  size_t object_line = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '!') {
      while (i < text.size() && text[i] != '\n') ++i;
      if (i < text.size()) ++line;
      continue;
    }
    if (c == '\n') ++line;
    if (c == ',' || c == ';') {
      if (!in_object) object_line = line;
      tokens.push_back(trim(cur));
      cur.clear();
      in_object = true;
      if (c == ';') {
        if (tokens.front().empty()) throw Error(ErrorCode::parse, "object without class name at line " + std::to_string(object_line));
        IdfObject o;
        o.cls = tokens.front();
        o.fields.assign(tokens.begin() + 1, tokens.end());
        doc.objects.push_back(std::move(o));
        tokens.clear();
        in_object = false;
      }
      continue;
    }
    if (!in_object && !std::isspace(static_cast<unsigned char>(c)) && cur.empty()) object_line = line;
    cur.push_back(c);
  }
  if (in_object || !trim(cur).empty()) {
    throw Error(ErrorCode::parse, "unterminated object starting at line " + std::to_string(object_line));
  }
  return doc;
}

std::string_view to_string(FindingKind k) {
  switch (k) {
    case FindingKind::physical: return "physical";
    case FindingKind::reference: return "reference";
    case FindingKind::duplicate: return "duplicate";
    case FindingKind::numeric: return "numeric";
    case FindingKind::structure: return "structure";
  }
  return "physical";
}

std::vector<Finding> validate_idf(const IdfDocument& doc) {
  std::vector<Finding> out;
  auto finding = [&](FindingKind k, const IdfObject& o, std::string msg) { out.push_back({k, o.cls, o.name(), std::move(msg)}); };

  if (doc.of_class("Version").empty()) out.push_back({FindingKind::structure, "Version", "", "missing Version object"});
  if (doc.of_class("Zone").empty()) out.push_back({FindingKind::structure, "Zone", "", "document has no zones"});

  std::map<std::string, std::set<std::string>> seen;
  for (const auto& o : doc.objects) {
    if (o.cls == "Version") continue;
    if (!seen[o.cls].insert(to_lower(o.name())).second) {
      finding(FindingKind::duplicate, o, "duplicate " + o.cls + " name \"" + o.name() + "\"");
    }
    const auto& names = field_names(o.cls);
    if (!names.empty() && o.cls != "Schedule:Compact" && o.fields.size() > names.size()) {
      finding(FindingKind::structure, o, "too many fields for " + o.cls);
    }
  }

  auto need_ref = [&](const IdfObject& o, size_t field, std::string_view target) {
    if (field >= o.fields.size() || o.fields[field].empty()) {
      finding(FindingKind::reference, o, "missing reference to " + std::string(target));
    } else if (!doc.find(target, o.fields[field])) {
      finding(FindingKind::reference, o, std::string(target) + " \"" + o.fields[field] + "\" not found");
    }
  };
  // Numeric check; returns nullopt after recording a finding.
  auto need_num = [&](const IdfObject& o, size_t field) -> std::optional<double> {
    auto v = o.number(field);
    if (!v || !std::isfinite(*v)) {
      const auto& names = field_names(o.cls);
      finding(FindingKind::numeric, o,
              (field < names.size() ? names[field] : "field " + std::to_string(field + 1)) + " is not a finite number");
      return std::nullopt;
    }
    return v;
  };

  for (const auto& o : doc.objects) {
    if (o.cls == "Zone") {
      if (auto a = need_num(o, 9); a && !(*a > 0)) finding(FindingKind::physical, o, "floor area must be > 0");
    } else if (o.cls == "BuildingSurface:Detailed") {
      need_ref(o, 2, "Construction");
      need_ref(o, 3, "Zone");
      if (auto a = need_num(o, 8); a && !(*a > 0)) finding(FindingKind::physical, o, "surface area must be > 0");
      // U-value through construction -> material
      if (o.fields.size() > 2) {
        const IdfObject* con = doc.find("Construction", o.fields[2]);
        const IdfObject* mat = con && con->fields.size() > 1 ? doc.find("Material:NoMass", con->fields[1]) : nullptr;
        if (mat) {
          auto r = mat->number(2);
          if (r && std::isfinite(*r)) {
            const double u = *r != 0 ? 1.0 / *r : INFINITY;
            if (!(u > 0 && u <= 10)) {
              finding(FindingKind::physical, o,
                      "surface " + o.name() + ": U-value " + format_number(u) + " W/m2-K outside (0, 10]");
            }
          }
        }
      }
    } else if (o.cls == "Construction") {
      need_ref(o, 1, "Material:NoMass");
    } else if (o.cls == "Material:NoMass") {
      need_num(o, 2);
    } else if (o.cls == "Schedule:Compact") {
      need_ref(o, 1, "ScheduleTypeLimits");
    } else if (o.cls == "People" || o.cls == "Lights" || o.cls == "ElectricEquipment") {
      need_ref(o, 1, "Zone");
      need_ref(o, 2, "Schedule:Compact");
      if (o.cls == "People") need_ref(o, 9, "Schedule:Compact");
      if (auto v = need_num(o, 5); v && !(*v >= 0)) finding(FindingKind::physical, o, "density must be >= 0");
    } else if (o.cls == "HVACTemplate:Zone:IdealLoadsAirSystem") {
      need_ref(o, 0, "Zone");
      need_ref(o, 1, "HVACTemplate:Thermostat");
    } else if (o.cls == "HVACTemplate:Plant:Boiler") {
      if (auto e = need_num(o, 3); e && !(*e > 0 && *e <= 1.5)) {
        finding(FindingKind::physical, o, "boiler efficiency " + format_number(*e) + " outside (0, 1.5]");
      }
    } else if (o.cls == "HVACTemplate:Plant:Chiller") {
      if (auto c = need_num(o, 3); c && !(*c > 0 && *c <= 15)) {
        finding(FindingKind::physical, o, "chiller COP " + format_number(*c) + " outside (0, 15]");
      }
    }
  }
  return out;
}

}  // namespace leedw::energymod
