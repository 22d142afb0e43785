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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sys/stat.h>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"
#include "leedw/energymod/simulate.hpp"

using namespace leedw;
using namespace leedw::energymod;

namespace {

Json q(double v, const std::string& u) { return store::quantity(v, u); }

Json profile(const DayProfile& p) {
  Json arr = Json::array();
  for (double v : p) arr.push_back(v);
  return {{"value", arr}, {"unit", "1"}};
}

DayProfile office_day() {
  DayProfile p{};
  for (int h = 8; h < 18; ++h) p[h] = 1.0;
  return p;
}

Json building_json(double u_wall = 0.5, double lighting = 10.0) {
  Json sched = {{"weekday", profile(office_day())}, {"saturday", profile({})}, {"sunday", profile({})}};
  return {
      {"zones", Json::array({{{"name", "Z1"}, {"floor_area", q(600, "m2")}}, {{"name", "Z2"}, {"floor_area", q(400, "m2")}}})},
      {"envelope",
       Json::array({{{"name", "W1"}, {"zone", "Z1"}, {"type", "wall"}, {"orientation", "S"}, {"area", q(120, "m2")}, {"u_value", q(u_wall, "W/(m2.K)")}},
                    {{"name", "G1"}, {"zone", "Z1"}, {"type", "window"}, {"orientation", "S"}, {"area", q(40, "m2")}, {"u_value", q(1.8, "W/(m2.K)")}},
                    {{"name", "R1"}, {"zone", "Z2"}, {"type", "roof"}, {"area", q(400, "m2")}, {"u_value", q(0.2, "W/(m2.K)")}}})},
      {"hvac", {{"system", "ideal_loads"}, {"heating_efficiency", q(0.9, "1")}, {"cooling_cop", q(3.5, "1")}}},
      {"internal_gains", {{"lighting", q(lighting, "W/m2")}, {"equipment", q(8, "W/m2")}, {"occupancy", q(5, "W/m2")}}},
      {"schedules", {{"occupancy", sched}}}};
}

store::UnifiedStore make_store(Json inputs) {
  store::ProjectRecord p;
  p.id = "e";
  p.name = "Energy";
  p.floor_area_m2 = 1000;
  p.location = {37.5, 127.0};
  return store::UnifiedStore::create(p, std::move(inputs));
}

Json weather_json() { return {{"hdd", q(2800, "K.d")}, {"cdd", q(900, "K.d")}, {"location", "Seoul"}}; }

BuildingModel random_model(std::mt19937& rng) {
  std::uniform_real_distribution<double> area(1, 500), u(0.1, 5), frac(0, 1);
  BuildingModel m;
  const int nz = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < nz; ++i) m.zones.push_back({"Z" + std::to_string(i + 1), area(rng)});
  const int ns = 1 + static_cast<int>(rng() % 8);
  for (int i = 0; i < ns; ++i) {
    SurfaceSpec s;
    s.name = "S" + std::to_string(i + 1);
    s.zone = m.zones[rng() % m.zones.size()].name;
    s.type = static_cast<SurfaceType>(rng() % 4);
    s.area = area(rng);
    s.u_value = u(rng);
    m.envelope.push_back(s);
  }
  m.hvac.heating_efficiency = 0.5 + frac(rng);
  m.hvac.cooling_cop = 1 + 5 * frac(rng);
  m.gains = {20 * frac(rng), 20 * frac(rng), 10 * frac(rng)};
  WeeklyTemplate t;
  for (auto* d : {&t.weekday, &t.saturday, &t.sunday}) {
    for (double& v : *d) v = frac(rng);
  }
  m.schedules["occupancy"] = expand_schedule(t);
  return m;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("leedw-test-" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

std::string make_script(const std::filesystem::path& dir, const std::string& body) {
  auto p = dir / "engine.sh";
  write_file_atomic(p, "#!/bin/sh\n" + body);
  ::chmod(p.c_str(), 0755);
  return p.string();
}

}  // namespace

TEST_CASE("weekly schedule expands to 8760 hours") {
  WeeklyTemplate t;
  t.weekday = office_day();
  auto s = expand_schedule(t);
  REQUIRE(s.values.size() == 8760);
  double first = 0, last = 0;
  for (int h = 0; h < 8736; ++h) first += s.values[h];
  for (int h = 8736; h < 8760; ++h) last += s.values[h];
  CHECK(first == doctest::Approx(2600));
  CHECK(last == doctest::Approx(10));
  CHECK(s.values[5 * 24 + 9] == 0.0);  // Saturday of week one

  t.holidays = {0, 364};
  CHECK(expand_schedule(t).sum() == doctest::Approx(2590));
}

TEST_CASE("schedule totals stay within profile bounds") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> frac(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    WeeklyTemplate t;
    for (auto* d : {&t.weekday, &t.saturday, &t.sunday}) {
      for (double& v : *d) v = frac(rng);
    }
    for (int k = 0; k < 5; ++k) t.holidays.insert(static_cast<int>(rng() % 365));
    auto s = expand_schedule(t);
    auto day_sum = [](const DayProfile& p) {
      double a = 0;
      for (double v : p) a += v;
      return a;
    };
    const double lo = std::min({day_sum(t.weekday), day_sum(t.saturday), day_sum(t.sunday)});
    const double hi = std::max({day_sum(t.weekday), day_sum(t.saturday), day_sum(t.sunday)});
    CHECK(s.sum() >= 365 * lo - 1e-9);
    CHECK(s.sum() <= 365 * hi + 1e-9);
  }
}

TEST_CASE("building model extraction") {
  auto st = make_store({{"building", building_json()}, {"weather", weather_json()}});
  auto m = extract_building_model(st);
  CHECK(m.zones.size() == 2);
  CHECK(m.floor_area() == doctest::Approx(1000));
  CHECK(m.ua() == doctest::Approx(120 * 0.5 + 40 * 1.8 + 400 * 0.2));
  CHECK(m.window_to_wall_ratio() == doctest::Approx(0.25));
  CHECK(m.schedule_for("lighting").sum() == doctest::Approx(2610));

  SUBCASE("missing U-value is reported by path") {
    Json b = building_json();
    b["envelope"][0].erase("u_value");
    try {
      extract_building_model(make_store({{"building", b}}));
      FAIL("expected missing_input");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::missing_input);
      REQUIRE(e.details().size() == 1);
      CHECK(e.details()[0] == "$.inputs.building.envelope[0].u_value");
    }
  }
  SUBCASE("incompatible unit is a validation error") {
    Json b = building_json();
    b["envelope"][1]["u_value"] = q(1.8, "m2");
    CHECK_THROWS_AS(extract_building_model(make_store({{"building", b}})), Error);
  }
  SUBCASE("negative gains are rejected") {
    Json b = building_json(0.5, -1);
    try {
      extract_building_model(make_store({{"building", b}}));
      FAIL("expected validation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::validation);
    }
  }
}

TEST_CASE("IDF emission and round trip") {
  BuildingModel one;
  one.zones = {{"Office", 250}};
  one.envelope = {{"Wall_S", "Office", SurfaceType::wall, "S", 50, 0.4}};
  WeeklyTemplate t;
  t.weekday = office_day();
  one.schedules["occupancy"] = expand_schedule(t);
  const std::string text = serialize_idf(emit_idf(one));
  size_t zones = 0;
  for (size_t pos = 0; (pos = text.find("\nZone,\n", pos)) != std::string::npos; ++pos) ++zones;
  CHECK(zones == 1);
  CHECK(text.find("Version,") != std::string::npos);
  CHECK(validate_idf(emit_idf(one)).empty());

  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto doc = emit_idf(random_model(rng));
    const std::string s1 = serialize_idf(doc);
    const auto parsed = parse_idf(s1);
    CHECK(parsed == doc);
    CHECK(serialize_idf(parsed) == s1);
    CHECK(validate_idf(doc).empty());
  }

  BuildingModel none;
  CHECK_THROWS_AS(emit_idf(none), Error);
  CHECK_THROWS_AS(parse_idf("Zone,\n  Z1,\n  0"), Error);
}

TEST_CASE("IDF validation findings") {
  BuildingModel m;
  m.zones = {{"Z1", 100}};
  m.envelope = {{"W1", "Z1", SurfaceType::wall, "N", 30, 0.5}};
  m.schedules["occupancy"] = expand_schedule({});
  auto doc = emit_idf(m);

  SUBCASE("non-physical U-value") {
    for (auto& o : doc.objects) {
      if (o.cls == "Material:NoMass") o.fields[2] = "-2";
    }
    auto f = validate_idf(doc);
    REQUIRE(f.size() == 1);
    CHECK(f[0].kind == FindingKind::physical);
    CHECK(f[0].object == "W1");
    CHECK(f[0].message.find("U-value -0.5") != std::string::npos);
  }
  SUBCASE("duplicate zone") {
    for (const auto& o : std::vector<IdfObject>(doc.objects)) {
      if (o.cls == "Zone") doc.objects.push_back(o);
    }
    auto f = validate_idf(doc);
    REQUIRE_FALSE(f.empty());
    CHECK(f[0].kind == FindingKind::duplicate);
    CHECK(f[0].message.find("Z1") != std::string::npos);
  }
  SUBCASE("dangling construction") {
    for (auto& o : doc.objects) {
      if (o.cls == "BuildingSurface:Detailed") o.fields[2] = "Nope";
    }
    auto f = validate_idf(doc);
    REQUIRE_FALSE(f.empty());
    CHECK(f[0].kind == FindingKind::reference);
  }
}

TEST_CASE("builtin degree-day model") {
  BuildingModel m;
  m.zones = {{"Z", 100}};
  m.envelope = {{"W", "Z", SurfaceType::wall, "S", 200, 0.5}};  // UA = 100 W/K
  m.hvac.heating_efficiency = 1.0;
  m.schedules["occupancy"] = expand_schedule({});
  Weather w{2000, 0, "", ""};
  auto r = simulate_builtin(m, w);
  CHECK(r.heating == doctest::Approx(4800));
  CHECK(r.cooling == 0.0);
  CHECK(r.lighting == 0.0);

  SUBCASE("zero UA") {
    m.envelope.clear();
    CHECK(simulate_builtin(m, w).heating == 0.0);
  }
  SUBCASE("independent oracle and linearity") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dd(0, 5000);
    for (int i = 0; i < 100; ++i) {
      auto rm = random_model(rng);
      Weather rw{dd(rng), dd(rng), "", ""};
      double ua = 0, area = 0, hours = 0;
      for (const auto& s : rm.envelope) ua += s.area * s.u_value;
      for (const auto& z : rm.zones) area += z.floor_area;
      for (double v : rm.schedules["occupancy"].values) hours += v;
      auto res = simulate_builtin(rm, rw);
      CHECK(res.heating == doctest::Approx(ua * rw.hdd * 0.024 / rm.hvac.heating_efficiency));
      CHECK(res.cooling == doctest::Approx(ua * rw.cdd * 0.024 / rm.hvac.cooling_cop));
      CHECK(res.lighting == doctest::Approx(rm.gains.lighting * area * hours / 1000));
      CHECK(res.equipment == doctest::Approx(rm.gains.equipment * area * hours / 1000));
      Weather doubled{2 * rw.hdd, 2 * rw.cdd, "", ""};
      auto res2 = simulate_builtin(rm, doubled);
      CHECK(res2.heating == doctest::Approx(2 * res.heating));
      CHECK(res2.cooling == doctest::Approx(2 * res.cooling));
    }
  }
}

TEST_CASE("energy metrics") {
  SimulationResult base, prop;
  base.heating = 1000;
  base.floor_area = 10;
  prop.heating = 700;
  prop.floor_area = 10;
  auto m = compute_energy_metrics(base, prop);
  REQUIRE(m.reduction);
  CHECK(*m.reduction == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(m.eui_baseline == doctest::Approx(100));

  SimulationResult big;
  big.equipment = 836124;
  big.floor_area = 6967.7;
  CHECK(std::abs(big.eui() - 120.0) <= 0.1);

  SimulationResult zero;
  zero.floor_area = 10;
  auto z = compute_energy_metrics(zero, prop);
  CHECK_FALSE(z.reduction);
  CHECK_FALSE(z.note.empty());
}

TEST_CASE("energymod results subtree") {
  auto st = make_store({{"building", building_json(0.5, 10)},
                        {"baseline_building", building_json(0.9, 14)},
                        {"weather", weather_json()}});
  const Json res = energymod_results(st);
  const auto& metrics = res["metrics"];
  REQUIRE(metrics.contains("energy_reduction"));
  const double red = metrics["energy_reduction"]["value"];
  CHECK(red > 0);
  CHECK(red < 1);
  CHECK(red == doctest::Approx(1 - res["proposed"]["total"]["value"].get<double>() /
                                       res["baseline"]["total"]["value"].get<double>()));
  CHECK(res["idf"]["findings"].empty());

  auto merged = store::merge_module_results(st, "energymod", {{"energymod", res}}, {"t1", iso8601_now()});
  CHECK(store::validate_store(merged).empty());
  auto hit = store::query_path(merged, "$.results.energymod.metrics.energy_reduction");
  REQUIRE(hit);
  REQUIRE(hit->quantity);
  CHECK(hit->quantity->unit == "1");

  SUBCASE("without a baseline the reduction is indeterminate") {
    auto solo = make_store({{"building", building_json()}, {"weather", weather_json()}});
    const Json r = energymod_results(solo);
    CHECK(r["metrics"]["reduction_status"] == "indeterminate");
    CHECK_FALSE(r["metrics"].contains("energy_reduction"));
    CHECK_FALSE(r["warnings"].empty());
  }
  SUBCASE("missing weather is a missing_input error") {
    auto nowx = make_store({{"building", building_json()}});
    try {
      energymod_results(nowx);
      FAIL("expected missing_input");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::missing_input);
    }
  }
}

TEST_CASE("external engine adapter") {
  BuildingModel m;
  m.zones = {{"Z", 100}};
  m.envelope = {{"W", "Z", SurfaceType::wall, "S", 200, 0.5}};
  m.schedules["occupancy"] = expand_schedule({});
  Weather w{2000, 500, "", "/dev/null"};

  SUBCASE("meter csv parsing") {
    auto r = parse_meter_csv("Date/Time,Heating:EnergyTransfer [J](Monthly),InteriorLights:Electricity [kWh](Monthly)\n"
                             " 01/31,3600000000,5\n 02/28,3600000000,7\n",
                             100);
    CHECK(r.heating == doctest::Approx(2000));
    CHECK(r.lighting == doctest::Approx(12));
    CHECK(r.engine == Engine::external);
    CHECK_THROWS_AS(parse_meter_csv("Date/Time,Other\n1,2\n", 1), Error);
  }
  SUBCASE("fake engine run") {
    auto dir = scratch_dir("engine-ok");
    auto script = make_script(dir, "grep -q '^Zone,' \"$1\" || exit 3\n"
                                   "printf 'Date/Time,Heating:EnergyTransfer [J](RunPeriod),Cooling:EnergyTransfer [J](RunPeriod)\\n"
                                   " 12/31,7200000000,1800000000\\n' > \"$3/eplusmtr.csv\"\n");
    ExternalEngine e{{script}, std::chrono::seconds(20), dir / "work"};
    auto r = simulate_external(m, w, e);
    CHECK(r.heating == doctest::Approx(2000));
    CHECK(r.cooling == doctest::Approx(500));
    CHECK(r.eui() == doctest::Approx(25));
    CHECK(std::filesystem::exists(dir / "work" / "in.idf"));
  }
  SUBCASE("engine failure carries the log tail") {
    auto dir = scratch_dir("engine-fail");
    auto script = make_script(dir, "echo '** Severe  ** bad geometry' >&2\nexit 1\n");
    try {
      simulate_external(m, w, {{script}, std::chrono::seconds(20), {}});
      FAIL("expected evaluation error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::evaluation);
      REQUIRE_FALSE(e.details().empty());
      CHECK(e.details()[0].find("bad geometry") != std::string::npos);
    }
  }
  SUBCASE("missing binary is transient and falls back") {
    try {
      simulate_external(m, w, {{"/nonexistent/energyplus"}, std::chrono::seconds(5), {}});
      FAIL("expected transient");
    } catch (const Error& e) {
      CHECK(e.transient());
      CHECK(std::string(e.what()).find("EngineUnavailable") != std::string::npos);
    }
    EnergyOptions opts;
    opts.engine = Engine::external;
    opts.external = ExternalEngine{{"/nonexistent/energyplus"}, std::chrono::seconds(5), {}};
    auto st = make_store({{"building", building_json()}, {"weather", weather_json()}});
    const Json r = energymod_results(st, opts);
    CHECK(r["proposed"]["engine"] == "builtin");
    bool mentioned = false;
    for (const auto& wmsg : r["warnings"]) mentioned |= wmsg.get<std::string>().find("EngineUnavailable") != std::string::npos;
    CHECK(mentioned);
    opts.fallback_to_builtin = false;
    CHECK_THROWS_AS(energymod_results(st, opts), Error);
  }
}
