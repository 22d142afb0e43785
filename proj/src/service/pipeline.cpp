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

#include "leedw/service/pipeline.hpp"

#include <memory>
#include <mutex>
#include <optional>

#include "leedw/common/error.hpp"
#include "leedw/credits/engine.hpp"
#include "leedw/docpipe/results.hpp"
#include "leedw/energymod/simulate.hpp"
#include "leedw/geo/geo.hpp"
#include "leedw/rag/index.hpp"
#include "leedw/reportgen/report.hpp"

namespace leedw::service {

namespace {

using std::chrono::milliseconds;

milliseconds ms(double seconds) { return milliseconds(static_cast<long>(seconds * 1000)); }

std::unique_ptr<docpipe::OcrAdapter> make_ocr(const OcrConfig& c) {
  if (c.kind == "subprocess") return std::make_unique<docpipe::SubprocessOcrAdapter>(c.command, ms(c.timeout_s));
  return std::make_unique<docpipe::StubOcrAdapter>(c.texts);
}

std::shared_ptr<rag::Embedder> make_embedder(const EmbeddingConfig& c) {
  auto hash = std::make_shared<rag::HashEmbedder>(c.dim);
  if (c.kind != "http") return hash;
  auto http = std::make_shared<rag::HttpEmbedder>(c.url, c.model, c.dim);
  if (!c.fallback_to_hash) return http;
  return std::make_shared<rag::ResilientEmbedder>(http, hash);
}

std::shared_ptr<reportgen::LlmClient> make_llm(const LlmConfig& c) {
  if (c.kind == "http") return std::make_shared<reportgen::HttpLlmClient>(c.url, c.model, c.temperature, ms(c.timeout_s));
  return std::make_shared<reportgen::MockLlmClient>(reportgen::results_summary_writer);
}

Json wrap(const std::string& module, Json subtree) { return Json{{module, std::move(subtree)}}; }

}  // namespace

std::map<std::string, orchestrator::TaskRunner> pipeline_runners(const Config& config) {
  config.validate();
  std::map<std::string, orchestrator::TaskRunner> runners;

  runners["docpipe"] = [config](const orchestrator::TaskContext& ctx) {
    auto adapter = make_ocr(config.ocr);
    docpipe::DocpipeOptions opt;
    opt.adapter = adapter.get();
    return wrap("docpipe", docpipe::docpipe_results(ctx.snapshot, opt));
  };

  runners["geo"] = [config](const orchestrator::TaskContext& ctx) {
    geo::GeoOptions opt;
    if (!config.gis.fixture.empty()) opt.fixture = config.gis.fixture;
    if (config.gis.api_url) opt.adapter = std::make_shared<geo::HttpGeoAdapter>(*config.gis.api_url);
    return wrap("geo", geo::geo_results(ctx.snapshot, opt));
  };

  runners["energymod"] = [config](const orchestrator::TaskContext& ctx) {
    energymod::EnergyOptions opt;
    opt.fallback_to_builtin = config.energy.fallback_to_builtin;
    if (config.energy.engine == "external") {
      opt.engine = energymod::Engine::external;
      opt.external = energymod::ExternalEngine{config.energy.command, std::chrono::minutes(10), {}};
    }
    return wrap("energymod", energymod::energymod_results(ctx.snapshot, opt));
  };

  // Rules load once, on first use.
  auto rules = std::make_shared<std::optional<credits::RuleSet>>();
  auto rules_mu = std::make_shared<std::mutex>();
  auto get_rules = [config, rules, rules_mu]() -> const credits::RuleSet& {
    std::lock_guard lock(*rules_mu);
    if (!*rules) *rules = credits::load_rules_dir(config.rules_dir);
    return **rules;
  };

  runners["credits"] = [get_rules](const orchestrator::TaskContext& ctx) {
    return wrap("credits", credits::credits_results(get_rules(), ctx.snapshot));
  };

  runners["reportgen"] = [config, get_rules](const orchestrator::TaskContext& ctx) {
    reportgen::ReportOptions opt;
    opt.rules = get_rules();
    opt.aliases = reportgen::load_aliases(config.aliases);
    opt.embedder = make_embedder(config.embedding);
    const auto kb = rag::load_knowledge_base(config.kb_dir);
    opt.index = std::make_shared<rag::VectorIndex>(rag::build_index(kb.chunks, *opt.embedder));
    opt.llm = make_llm(config.llm);
    return wrap("reportgen", reportgen::reportgen_results(ctx.snapshot, opt));
  };
  return runners;
}

orchestrator::ExecutionOptions execution_options(const Config& config) {
  orchestrator::ExecutionOptions opt;
  opt.workers = config.workers;
  opt.retry = config.retry;
  opt.memory.threshold = config.memory_threshold;
  return opt;
}

}  // namespace leedw::service
