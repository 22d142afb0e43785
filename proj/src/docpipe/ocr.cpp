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

#include "leedw/docpipe/ocr.hpp"

#include <json.hpp>

#include <algorithm>

#include "leedw/common/error.hpp"
#include "leedw/common/process.hpp"

namespace leedw::docpipe {

std::string_view to_string(LanguageHint hint) {
  switch (hint) {
    case LanguageHint::ko: return "ko";
    case LanguageHint::en: return "en";
    case LanguageHint::mixed: return "mixed";
    case LanguageHint::unknown: return "unknown";
  }
  return "unknown";
}

LanguageHint parse_language_hint(std::string_view s) {
  if (s == "ko") return LanguageHint::ko;
  if (s == "en") return LanguageHint::en;
  if (s == "mixed") return LanguageHint::mixed;
  return LanguageHint::unknown;
}

LanguageHint detect_language(std::string_view utf8) {
  bool hangul = false, latin = false;
  for (size_t i = 0; i < utf8.size();) {
    const auto b = static_cast<unsigned char>(utf8[i]);
    if (b < 0x80) {
      latin |= std::isalpha(b) != 0;
      ++i;
      continue;
    }
    const int len = b >= 0xF0 ? 4 : b >= 0xE0 ? 3 : b >= 0xC0 ? 2 : 1;
    if (len == 3 && i + 2 < utf8.size()) {
      const unsigned cp = ((b & 0x0F) << 12) | ((static_cast<unsigned char>(utf8[i + 1]) & 0x3F) << 6) |
                          (static_cast<unsigned char>(utf8[i + 2]) & 0x3F);
      // Hangul syllables and compatibility jamo
      hangul |= (cp >= 0xAC00 && cp <= 0xD7A3) || (cp >= 0x3130 && cp <= 0x318F);
    }
    i += static_cast<size_t>(len);
  }
  if (hangul && latin) return LanguageHint::mixed;
  if (hangul) return LanguageHint::ko;
  if (latin) return LanguageHint::en;
  return LanguageHint::unknown;
}

StubOcrAdapter::StubOcrAdapter(std::vector<std::string> texts)
    : fn_([texts = std::move(texts)](const RasterPage&, size_t call) {
        if (call >= texts.size()) {
          throw Error(ErrorCode::evaluation, "stub OCR has no response for call " + std::to_string(call));
        }
        return OcrResult{texts[call], 1.0, detect_language(texts[call])};
      }) {}

StubOcrAdapter::StubOcrAdapter(Fn fn) : fn_(std::move(fn)) {}

OcrResult StubOcrAdapter::recognize(const RasterPage& crop) { return fn_(crop, calls_++); }

SubprocessOcrAdapter::SubprocessOcrAdapter(std::vector<std::string> argv, std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {
  if (argv_.empty()) throw Error(ErrorCode::configuration, "OCR command is empty");
}

std::string SubprocessOcrAdapter::name() const { return argv_.front(); }

bool SubprocessOcrAdapter::available() const { return executable_available(argv_.front()); }

OcrResult SubprocessOcrAdapter::recognize(const RasterPage& crop) {
  const ProcessResult r = run_process(argv_, encode_png(crop), timeout_);
  if (r.exit_code != 0) {
    throw Error(ErrorCode::evaluation, "OCR engine '" + name() + "' exited with " + std::to_string(r.exit_code));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(r.out);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::protocol, "OCR engine '" + name() + "' returned invalid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
    throw Error(ErrorCode::protocol, "OCR engine '" + name() + "' response lacks a text field");
  }
  OcrResult out;
  out.text = j["text"].get<std::string>();
  out.confidence = std::clamp(j.value("confidence", 0.0), 0.0, 1.0);
  out.lang = j.contains("lang") && j["lang"].is_string() ? parse_language_hint(j["lang"].get<std::string>())
                                                         : detect_language(out.text);
  return out;
}

std::vector<ExtractedText> ocr_extract(const RasterPage& page, const std::vector<TextRegion>& regions,
                                       OcrAdapter& adapter) {
  if (!adapter.available()) {
    throw Error(ErrorCode::transient, "OCR adapter '" + adapter.name() + "' is unavailable");
  }
  std::vector<ExtractedText> out;
  out.reserve(regions.size());
  for (const auto& region : regions) {
    ExtractedText e{region, {}, 0.0, LanguageHint::unknown};
    try {
      OcrResult r = adapter.recognize(page.crop(region.bbox));
      e.text = std::move(r.text);
      e.confidence = std::clamp(r.confidence, 0.0, 1.0);
      e.language_hint = r.lang;
    } catch (const std::exception&) {
      e.text.clear();
      e.confidence = 0.0;
    }
    out.push_back(std::move(e));
  }
  return out;
}

DocumentExtraction process_document(const std::vector<RasterPage>& pages, const DetectParams& params,
                                    OcrAdapter& adapter) {
  for (const auto& p : pages) p.validate();
  params.validate();
  DocumentExtraction doc;
  for (const auto& page : pages) {
    auto trace = detect_text_regions_traced(page, params);
    PageExtraction pe;
    pe.regions = std::move(trace.regions);
    pe.texts = ocr_extract(page, pe.regions, adapter);
    pe.metrics.components_found = trace.components_found;
    pe.metrics.regions_kept = static_cast<long>(pe.regions.size());
    pe.metrics.regions_ocrd = static_cast<long>(
        std::count_if(pe.texts.begin(), pe.texts.end(), [](const ExtractedText& t) { return t.confidence > 0; }));
    doc.metrics.components_found += pe.metrics.components_found;
    doc.metrics.regions_kept += pe.metrics.regions_kept;
    doc.metrics.regions_ocrd += pe.metrics.regions_ocrd;
    doc.pages.push_back(std::move(pe));
  }
  return doc;
}

}  // namespace leedw::docpipe
