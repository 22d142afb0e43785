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
#include "leedw/orchestrator/executor.hpp"

namespace leedw::service {

struct OcrConfig {
  std::string kind = "stub";  // stub | subprocess
  std::vector<std::string> texts;
  std::vector<std::string> command;
  double timeout_s = 60;
};

struct LlmConfig {
  std::string kind = "mock";  // mock | http
  std::string url;
  std::string model = "local-writer";
  double temperature = 0.0;
  double timeout_s = 120;
};

struct EmbeddingConfig {
  std::string kind = "hash";  // hash | http
  std::string url;
  std::string model;
  int dim = 384;
  bool fallback_to_hash = true;
};

struct GisConfig {
  std::optional<std::string> api_url;
  std::filesystem::path fixture;
};

struct EnergyConfig {
  std::string engine = "builtin";  // builtin | external
  std::vector<std::string> command;
  bool fallback_to_builtin = true;
};

struct Config {
  std::filesystem::path projects_root = "leedw-projects";
  std::filesystem::path rules_dir;
  std::filesystem::path kb_dir;
  std::filesystem::path aliases;
  std::size_t workers = 2;
  orchestrator::RetryPolicy retry;
  double memory_threshold = 0.70;
  OcrConfig ocr;
  LlmConfig llm;
  EmbeddingConfig embedding;
  GisConfig gis;
  EnergyConfig energy;

  /// Throws Error(configuration) listing every problem.
  void validate() const;
  Json to_json() const;
};

/// Defaults point at the bundled data directory.
Config default_config();

/// Relative paths in the document resolve against `base_dir`.
Config config_from_json(const Json& j, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& file);

/// The explicit path if given, else $LEEDW_CONFIG, else ./leedw.json when it
/// exists; nullopt means built-in defaults.
std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace leedw::service
