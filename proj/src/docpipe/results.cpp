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

#include "leedw/docpipe/results.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"
#include "leedw/docpipe/image.hpp"

namespace leedw::docpipe {

namespace {

std::string snake_case(const std::string& label) {
  std::string out;
  for (char c : to_lower(trim(label))) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

Json box_json(const Box& b) {
  return {{"x", store::quantity(b.x, "1")},
          {"y", store::quantity(b.y, "1")},
          {"w", store::quantity(b.w, "1")},
          {"h", store::quantity(b.h, "1")}};
}

std::vector<std::filesystem::path> page_paths(const Json& doc, const std::filesystem::path& base) {
  std::vector<std::filesystem::path> out;
  auto add = [&](const Json& p) {
    std::filesystem::path path = p.get<std::string>();
    out.push_back(path.is_absolute() ? path : base / path);
  };
  if (doc.contains("pages")) {
    for (const auto& p : doc["pages"]) add(p);
  } else {
    add(doc.at("path"));
  }
  return out;
}

}  // namespace

std::optional<ExtractedField> parse_field_line(const std::string& text) {
  static const std::regex re(R"(^\s*([A-Za-z][A-Za-z0-9 _/()-]*?)\s*:\s*([-+]?[0-9][0-9,]*(?:\.[0-9]+)?)\s*(\S*)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return std::nullopt;
  std::string digits = m[2].str();
  digits.erase(std::remove(digits.begin(), digits.end(), ','), digits.end());
  std::string unit = m[3].str();
  if (unit.empty() || unit == "ea") unit = "1";
  if (!units::known(unit)) return std::nullopt;
  const std::string name = snake_case(m[1].str());
  if (name.empty()) return std::nullopt;
  return ExtractedField{name, {std::stod(digits), units::normalize(unit)}};
}

Json docpipe_results(const store::UnifiedStore& store, const DocpipeOptions& options) {
  if (!options.adapter) throw Error(ErrorCode::configuration, "document processing needs an OCR adapter");
  const Json& inputs = store.inputs();
  Json docs = Json::object();
  Json fields = Json::object();
  Json sources = Json::object();
  if (!inputs.contains("documents")) return {{"documents", docs}, {"fields", fields}, {"field_sources", sources}};

  for (const auto& d : inputs["documents"]) {
    std::string id;
    std::vector<RasterPage> pages;
    try {
      id = d.at("id").get<std::string>();
      const double dpi = d.contains("dpi") ? (store::is_quantity(d["dpi"]) ? d["dpi"]["value"].get<double>() : d["dpi"].get<double>()) : 600.0;
      for (const auto& p : page_paths(d, options.base_dir)) pages.push_back(load_raster(p, dpi));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::validation, std::string("malformed document entry: ") + e.what());
    }
    const auto ex = process_document(pages, options.params, *options.adapter);
    Json regions = Json::array();
    int n = 0;
    for (size_t p = 0; p < ex.pages.size(); ++p) {
      for (const auto& t : ex.pages[p].texts) {
        const std::string region_id = "r" + std::to_string(++n);
        regions.push_back({{"id", region_id},
                           {"page", store::quantity(static_cast<double>(p + 1), "1")},
                           {"bbox", box_json(t.region.bbox)},
                           {"text", t.text},
                           {"confidence", store::quantity(t.confidence, "1")},
                           {"language_hint", to_string(t.language_hint)}});
        if (t.confidence < options.min_confidence) continue;
        const auto f = parse_field_line(t.text);
        if (!f || fields.contains(f->name)) continue;
        fields[f->name] = store::quantity(f->value);
        sources[f->name] = id + "#" + region_id;
      }
    }
    docs[id] = {{"pages", store::quantity(static_cast<double>(pages.size()), "1")},
                {"regions", regions},
                {"metrics",
                 {{"components_found", store::quantity(static_cast<double>(ex.metrics.components_found), "1")},
                  {"regions_kept", store::quantity(static_cast<double>(ex.metrics.regions_kept), "1")},
                  {"regions_ocrd", store::quantity(static_cast<double>(ex.metrics.regions_ocrd), "1")}}}};
  }
  return {{"documents", docs}, {"fields", fields}, {"field_sources", sources}};
}

}  // namespace leedw::docpipe
