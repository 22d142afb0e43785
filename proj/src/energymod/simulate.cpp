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

#include "leedw/energymod/simulate.hpp"

#include <atomic>
#include <sstream>
#include <unistd.h>

#include "leedw/common/error.hpp"
#include "leedw/common/process.hpp"
#include "leedw/common/util.hpp"

namespace leedw::energymod {

std::string_view to_string(Engine e) { return e == Engine::builtin ? "builtin" : "external"; }

Json SimulationResult::to_json() const {
  return {{"heating", store::quantity(heating, "kWh")},
          {"cooling", store::quantity(cooling, "kWh")},
          {"lighting", store::quantity(lighting, "kWh")},
          {"equipment", store::quantity(equipment, "kWh")},
          {"total", store::quantity(total(), "kWh")},
          {"eui", store::quantity(eui(), "kWh/m2.yr")},
          {"floor_area", store::quantity(floor_area, "m2")},
          {"engine", to_string(engine)},
          {"warnings", warnings}};
}

SimulationResult simulate_builtin(const BuildingModel& model, const Weather& weather) {
  model.validate();
  SimulationResult r;
  r.engine = Engine::builtin;
  r.floor_area = model.floor_area();
  const double ua = model.ua();
  r.heating = ua * weather.hdd * 24.0 / 1000.0 / model.hvac.heating_efficiency;
  r.cooling = ua * weather.cdd * 24.0 / 1000.0 / model.hvac.cooling_cop;
  r.lighting = model.gains.lighting * r.floor_area * model.schedule_for("lighting").sum() / 1000.0;
  r.equipment = model.gains.equipment * r.floor_area * model.schedule_for("equipment").sum() / 1000.0;
  return r;
}

SimulationResult parse_meter_csv(std::string_view csv, double floor_area) {
  std::istringstream in{std::string(csv)};
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::protocol, "meter output is empty");
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    for (std::string c; std::getline(hs, c, ',');) cols.push_back(trim(c));
  }
  SimulationResult r;
  r.engine = Engine::external;
  r.floor_area = floor_area;
  std::vector<double*> target(cols.size(), nullptr);
  std::vector<double> scale(cols.size(), 1.0);
  bool any = false;
  for (size_t i = 0; i < cols.size(); ++i) {
    const std::string& c = cols[i];
    if (c.rfind("Heating:", 0) == 0) target[i] = &r.heating;
    else if (c.rfind("Cooling:", 0) == 0) target[i] = &r.cooling;
    else if (c.rfind("InteriorLights:", 0) == 0) target[i] = &r.lighting;
    else if (c.rfind("InteriorEquipment:", 0) == 0) target[i] = &r.equipment;
    if (!target[i]) continue;
    any = true;
    if (c.find("[J]") != std::string::npos) scale[i] = 1.0 / 3.6e6;
    else if (c.find("[kWh]") != std::string::npos) scale[i] = 1.0;
    else throw Error(ErrorCode::protocol, "meter column without a [J] or [kWh] unit: " + c);
  }
  if (!any) throw Error(ErrorCode::protocol, "meter output has no end-use columns");
  for (std::string line; std::getline(in, line);) {
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    size_t i = 0;
    for (std::string cell; std::getline(ls, cell, ','); ++i) {
      if (i >= target.size() || !target[i]) continue;
      try {
        *target[i] += std::stod(trim(cell)) * scale[i];
      } catch (const std::exception&) {
        throw Error(ErrorCode::protocol, "non-numeric meter value \"" + cell + "\"");
      }
    }
  }
  return r;
}

SimulationResult simulate_external(const BuildingModel& model, const Weather& weather, const ExternalEngine& engine) {
  if (engine.command.empty()) throw Error(ErrorCode::configuration, "external engine command is empty");
  if (!executable_available(engine.command.front())) {
    throw Error(ErrorCode::transient, "EngineUnavailable: " + engine.command.front() + " not found");
  }
  static std::atomic<int> counter{0};
  std::filesystem::path dir = engine.workdir;
  if (dir.empty()) {
    dir = std::filesystem::temp_directory_path() /
          ("leedw-sim-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  }
  std::filesystem::create_directories(dir / "out");
  const auto idf_path = dir / "in.idf";
  write_file_atomic(idf_path, serialize_idf(emit_idf(model)));
  std::vector<std::string> argv = engine.command;
  argv.push_back(idf_path.string());
  argv.push_back(weather.file);
  argv.push_back((dir / "out").string());
  const auto res = run_process(argv, {}, engine.timeout, dir);
  if (res.exit_code != 0) {
    std::string log = res.err.empty() ? res.out : res.err;
    std::vector<std::string> lines;
    std::istringstream ls(log);
    for (std::string l; std::getline(ls, l);) lines.push_back(l);
    std::string tail;
    for (size_t i = lines.size() > 20 ? lines.size() - 20 : 0; i < lines.size(); ++i) tail += lines[i] + "\n";
    throw Error(ErrorCode::evaluation, "simulation engine exited with status " + std::to_string(res.exit_code), {tail});
  }
  const auto meters = dir / "out" / "eplusmtr.csv";
  if (!std::filesystem::exists(meters)) throw Error(ErrorCode::protocol, "engine produced no meter output");
  auto r = parse_meter_csv(read_file(meters), model.floor_area());
  if (engine.workdir.empty()) std::filesystem::remove_all(dir);
  return r;
}

EnergyMetrics compute_energy_metrics(const SimulationResult& baseline, const SimulationResult& proposed) {
  EnergyMetrics m;
  m.eui_proposed = proposed.eui();
  m.eui_baseline = baseline.eui();
  if (baseline.total() > 0) {
    m.reduction = 1.0 - proposed.total() / baseline.total();
  } else {
    m.note = "baseline total is zero; reduction is indeterminate";
  }
  return m;
}

namespace {

SimulationResult run(const BuildingModel& model, const Weather& weather, const EnergyOptions& options,
                     std::vector<std::string>& warnings) {
  if (options.engine == Engine::external) {
    if (!options.external) throw Error(ErrorCode::configuration, "external engine selected but not configured");
    try {
      return simulate_external(model, weather, *options.external);
    } catch (const Error& e) {
      if (!e.transient() || !options.fallback_to_builtin) throw;
      warnings.push_back(std::string(e.what()) + "; used the builtin model instead");
    }
  }
  return simulate_builtin(model, weather);
}

Json findings_json(const std::vector<Finding>& findings) {
  Json out = Json::array();
  for (const auto& f : findings) {
    out.push_back({{"kind", to_string(f.kind)}, {"class", f.cls}, {"object", f.object}, {"message", f.message}});
  }
  return out;
}

}  // namespace

Json energymod_results(const store::UnifiedStore& store, const EnergyOptions& options) {
  std::vector<std::string> warnings;
  const BuildingModel proposed = extract_building_model(store, "building");
  const Weather weather = extract_weather(store);
  const IdfDocument idf = emit_idf(proposed);
  const auto findings = validate_idf(idf);
  if (!findings.empty() && options.engine == Engine::external) {
    throw Error(ErrorCode::validation, "generated IDF failed validation: " + findings.front().message);
  }
  const SimulationResult p = run(proposed, weather, options, warnings);

  Json out = {{"proposed", p.to_json()},
              {"idf", {{"text", serialize_idf(idf)}, {"findings", findings_json(findings)}}}};
  Json metrics = {{"eui_proposed", store::quantity(p.eui(), "kWh/m2.yr")}};
  if (store::query_path(store, "$.inputs.baseline_building")) {
    const BuildingModel base = extract_building_model(store, "baseline_building");
    const SimulationResult b = run(base, weather, options, warnings);
    const auto m = compute_energy_metrics(b, p);
    out["baseline"] = b.to_json();
    metrics["eui_baseline"] = store::quantity(m.eui_baseline, "kWh/m2.yr");
    if (m.reduction) {
      metrics["energy_reduction"] = store::quantity(*m.reduction, "1");
      metrics["reduction_status"] = "determinate";
    } else {
      metrics["reduction_status"] = "indeterminate";
      warnings.push_back(m.note);
    }
  } else {
    metrics["reduction_status"] = "indeterminate";
    warnings.push_back("no baseline building in $.inputs.baseline_building; reduction is indeterminate");
  }
  out["metrics"] = metrics;
  out["warnings"] = warnings;
  return out;
}

}  // namespace leedw::energymod
