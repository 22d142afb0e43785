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

#include "leedw/service/config.hpp"

#include <cstdlib>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

#ifndef LEEDW_DATA_DIR
#define LEEDW_DATA_DIR "data"
#endif

namespace leedw::service {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path = p;
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<std::string> string_list(const Json& j) {
  std::vector<std::string> out;
  for (const auto& s : j) out.push_back(s.get<std::string>());
  return out;
}

}  // namespace

Config default_config() {
  const std::filesystem::path data = LEEDW_DATA_DIR;
  Config c;
  c.rules_dir = data / "rules";
  c.kb_dir = data / "kb";
  c.aliases = data / "reports" / "aliases.json";
  c.gis.fixture = data / "gis" / "sample_city.json";
  return c;
}

void Config::validate() const {
  std::vector<std::string> problems;
  if (workers < 1) problems.push_back("workers must be >= 1");
  if (!(memory_threshold > 0 && memory_threshold <= 1)) problems.push_back("memory_threshold must be in (0, 1]");
  try {
    retry.validate();
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  if (ocr.kind != "stub" && ocr.kind != "subprocess") problems.push_back("adapters.ocr.kind must be stub or subprocess");
  if (ocr.kind == "subprocess" && ocr.command.empty()) problems.push_back("adapters.ocr.command is required");
  if (llm.kind != "mock" && llm.kind != "http") problems.push_back("adapters.llm.kind must be mock or http");
  if (llm.kind == "http" && llm.url.empty()) problems.push_back("adapters.llm.url is required");
  if (embedding.kind != "hash" && embedding.kind != "http") problems.push_back("adapters.embedding.kind must be hash or http");
  if (embedding.kind == "http" && embedding.url.empty()) problems.push_back("adapters.embedding.url is required");
  if (embedding.dim < 1) problems.push_back("adapters.embedding.dim must be >= 1");
  if (energy.engine != "builtin" && energy.engine != "external") problems.push_back("adapters.energy.engine must be builtin or external");
  if (energy.engine == "external" && energy.command.empty()) problems.push_back("adapters.energy.command is required");
  if (!gis.api_url && gis.fixture.empty()) problems.push_back("adapters.gis needs api_url or fixture");
  if (!problems.empty()) throw Error(ErrorCode::configuration, "invalid configuration", problems);
}

Json Config::to_json() const {
  Json gis_j = {{"fixture", gis.fixture.string()}};
  if (gis.api_url) gis_j["api_url"] = *gis.api_url;
  return {{"projects_root", projects_root.string()},
          {"rules_dir", rules_dir.string()},
          {"kb_dir", kb_dir.string()},
          {"aliases", aliases.string()},
          {"workers", workers},
          {"memory_threshold", memory_threshold},
          {"retry", {{"max_attempts", retry.max_attempts}, {"base_delay", retry.base_delay}, {"backoff_factor", retry.backoff_factor}}},
          {"adapters",
           {{"ocr", {{"kind", ocr.kind}, {"texts", ocr.texts}, {"command", ocr.command}, {"timeout_s", ocr.timeout_s}}},
            {"llm", {{"kind", llm.kind}, {"url", llm.url}, {"model", llm.model}, {"temperature", llm.temperature}, {"timeout_s", llm.timeout_s}}},
            {"embedding", {{"kind", embedding.kind}, {"url", embedding.url}, {"model", embedding.model}, {"dim", embedding.dim}, {"fallback_to_hash", embedding.fallback_to_hash}}},
            {"gis", gis_j},
            {"energy", {{"engine", energy.engine}, {"command", energy.command}, {"fallback_to_builtin", energy.fallback_to_builtin}}}}}};
}

Config config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  Config c = default_config();
  try {
    if (j.contains("projects_root")) c.projects_root = resolve(base_dir, j["projects_root"]);
    if (j.contains("rules_dir")) c.rules_dir = resolve(base_dir, j["rules_dir"]);
    if (j.contains("kb_dir")) c.kb_dir = resolve(base_dir, j["kb_dir"]);
    if (j.contains("aliases")) c.aliases = resolve(base_dir, j["aliases"]);
    if (j.contains("workers")) c.workers = j["workers"].get<std::size_t>();
    if (j.contains("memory_threshold")) c.memory_threshold = j["memory_threshold"].get<double>();
    if (j.contains("retry")) {
      const auto& r = j["retry"];
      c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
      c.retry.base_delay = r.value("base_delay", c.retry.base_delay);
      c.retry.backoff_factor = r.value("backoff_factor", c.retry.backoff_factor);
    }
    const Json a = j.value("adapters", Json::object());
    if (a.contains("ocr")) {
      const auto& o = a["ocr"];
      c.ocr.kind = o.value("kind", c.ocr.kind);
      if (o.contains("texts")) c.ocr.texts = string_list(o["texts"]);
      if (o.contains("command")) c.ocr.command = string_list(o["command"]);
      c.ocr.timeout_s = o.value("timeout_s", c.ocr.timeout_s);
    }
    if (a.contains("llm")) {
      const auto& o = a["llm"];
      c.llm.kind = o.value("kind", c.llm.kind);
      c.llm.url = o.value("url", c.llm.url);
      c.llm.model = o.value("model", c.llm.model);
      c.llm.temperature = o.value("temperature", c.llm.temperature);
      c.llm.timeout_s = o.value("timeout_s", c.llm.timeout_s);
    }
    if (a.contains("embedding")) {
      const auto& o = a["embedding"];
      c.embedding.kind = o.value("kind", c.embedding.kind);
      c.embedding.url = o.value("url", c.embedding.url);
      c.embedding.model = o.value("model", c.embedding.model);
      c.embedding.dim = o.value("dim", c.embedding.dim);
      c.embedding.fallback_to_hash = o.value("fallback_to_hash", c.embedding.fallback_to_hash);
    }
    if (a.contains("gis")) {
      const auto& o = a["gis"];
      if (o.contains("api_url") && !o["api_url"].is_null()) c.gis.api_url = o["api_url"].get<std::string>();
      if (o.contains("fixture")) c.gis.fixture = o["fixture"].is_null() ? std::filesystem::path() : resolve(base_dir, o["fixture"]);
    }
    if (a.contains("energy")) {
      const auto& o = a["energy"];
      c.energy.engine = o.value("engine", c.energy.engine);
      if (o.contains("command")) c.energy.command = string_list(o["command"]);
      c.energy.fallback_to_builtin = o.value("fallback_to_builtin", c.energy.fallback_to_builtin);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::configuration, std::string("malformed configuration: ") + e.what());
  }
  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& file) {
  Json j;
  try {
    j = Json::parse(read_file(file));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::configuration, file.string() + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::absolute(file).parent_path());
}

std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return explicit_path;
  if (const char* env = std::getenv("LEEDW_CONFIG"); env && *env) return std::filesystem::path(env);
  if (std::filesystem::exists("leedw.json")) return std::filesystem::path("leedw.json");
  return std::nullopt;
}

}  // namespace leedw::service
