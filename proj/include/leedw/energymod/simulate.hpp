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

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "leedw/energymod/idf.hpp"

namespace leedw::energymod {

enum class Engine { builtin, external };

std::string_view to_string(Engine e);

struct SimulationResult {
  double heating = 0.0;    // kWh
  double cooling = 0.0;    // kWh
  double lighting = 0.0;   // kWh
  double equipment = 0.0;  // kWh
  double floor_area = 0.0; // m2, conditioned
  Engine engine = Engine::builtin;
  std::vector<std::string> warnings;

  double total() const { return heating + cooling + lighting + equipment; }
  /// kWh/m2.yr
  double eui() const { return floor_area > 0 ? total() / floor_area : 0.0; }
  Json to_json() const;
};

/// Steady-state degree-day model.
SimulationResult simulate_builtin(const BuildingModel& model, const Weather& weather);

struct ExternalEngine {
  std::vector<std::string> command;  // invoked as command + {idf, weather, outdir}
  std::chrono::milliseconds timeout = std::chrono::minutes(10);
  std::filesystem::path workdir;     // defaults to a fresh temp directory
};

/// Sums annual end uses from an engine meter CSV. Columns are matched by
/// prefix (Heating:, Cooling:, InteriorLights:, InteriorEquipment:) and
/// converted from [J] or [kWh].
SimulationResult parse_meter_csv(std::string_view csv, double floor_area);

/// Missing binary -> Error(transient) "EngineUnavailable"; non-zero exit ->
/// Error(evaluation) carrying the tail of the engine log.
SimulationResult simulate_external(const BuildingModel& model, const Weather& weather, const ExternalEngine& engine);

struct EnergyMetrics {
  double eui_proposed = 0.0;
  double eui_baseline = 0.0;
  std::optional<double> reduction;  // nullopt when the baseline total is 0
  std::string note;
};

EnergyMetrics compute_energy_metrics(const SimulationResult& baseline, const SimulationResult& proposed);

struct EnergyOptions {
  Engine engine = Engine::builtin;
  std::optional<ExternalEngine> external;
  bool fallback_to_builtin = true;
};

/// The results subtree for $.results.energymod: proposed and baseline runs,
/// metrics for the credits module, the emitted IDF and its findings.
Json energymod_results(const store::UnifiedStore& store, const EnergyOptions& options = {});

}  // namespace leedw::energymod
