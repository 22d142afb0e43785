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

#include <atomic>
#include <chrono>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "leedw/docpipe/detect.hpp"

namespace leedw::docpipe {

enum class LanguageHint { ko, en, mixed, unknown };

std::string_view to_string(LanguageHint hint);
LanguageHint parse_language_hint(std::string_view s);
/// Hangul and Latin letters present -> mixed; only one script -> ko / en.
LanguageHint detect_language(std::string_view utf8);

struct OcrResult {
  std::string text;
  double confidence = 0.0;
  LanguageHint lang = LanguageHint::unknown;
};

struct ExtractedText {
  TextRegion region;
  std::string text;
  double confidence = 0.0;
  LanguageHint language_hint = LanguageHint::unknown;
};

class OcrAdapter {
 public:
  virtual ~OcrAdapter() = default;
  virtual std::string name() const = 0;
  virtual bool available() const = 0;
  /// Recognizes one cropped region. Throwing marks only that region failed.
  virtual OcrResult recognize(const RasterPage& crop) = 0;
};

/// Deterministic in-process adapter. Returns the configured strings in call
/// order with confidence 1; calls past the end fail.
class StubOcrAdapter : public OcrAdapter {
 public:
  using Fn = std::function<OcrResult(const RasterPage&, size_t call)>;

  explicit StubOcrAdapter(std::vector<std::string> texts);
  explicit StubOcrAdapter(Fn fn);

  std::string name() const override { return "stub"; }
  bool available() const override { return true; }
  OcrResult recognize(const RasterPage& crop) override;
  size_t calls() const { return calls_; }

 private:
  Fn fn_;
  std::atomic<size_t> calls_{0};
};

/// External engine: PNG crop on stdin, one JSON object {text, confidence,
/// lang} on stdout.
class SubprocessOcrAdapter : public OcrAdapter {
 public:
  explicit SubprocessOcrAdapter(std::vector<std::string> argv,
                                std::chrono::milliseconds timeout = std::chrono::seconds(60));

  std::string name() const override;
  bool available() const override;
  OcrResult recognize(const RasterPage& crop) override;

 private:
  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
};

/// One entry per region, in region order. Throws Error(transient) naming the
/// adapter when it is unavailable.
std::vector<ExtractedText> ocr_extract(const RasterPage& page, const std::vector<TextRegion>& regions,
                                       OcrAdapter& adapter);

struct StageMetrics {
  long components_found = 0;
  long regions_kept = 0;
  long regions_ocrd = 0;
};

struct PageExtraction {
  std::vector<TextRegion> regions;
  std::vector<ExtractedText> texts;
  StageMetrics metrics;
};

struct DocumentExtraction {
  std::vector<PageExtraction> pages;
  StageMetrics metrics;  // summed over pages
};

/// Validates every page first; dpi below 72 raises Error(unsupported_input).
DocumentExtraction process_document(const std::vector<RasterPage>& pages, const DetectParams& params,
                                    OcrAdapter& adapter);

}  // namespace leedw::docpipe
