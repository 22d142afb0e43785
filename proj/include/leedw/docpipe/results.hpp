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
#include <map>
#include <optional>
#include <string>

#include "leedw/datastore/store.hpp"
#include "leedw/docpipe/ocr.hpp"

namespace leedw::docpipe {

/// One "label: number unit" line read off a document, e.g.
/// "Recycled content: 27.5 %". The label becomes a snake_case field name.
struct ExtractedField {
  std::string name;
  Quantity value;
};

/// nullopt unless the text has that shape and the unit is known ("" and
/// "ea" read as a count).
std::optional<ExtractedField> parse_field_line(const std::string& text);

struct DocpipeOptions {
  std::filesystem::path base_dir;  // relative document paths resolve here
  DetectParams params;
  OcrAdapter* adapter = nullptr;
  double min_confidence = 0.5;  // fields below this are not reported
};

/// $.results.docpipe for every entry of $.inputs.documents
/// ({id, path, dpi?}): per-document regions and metrics, plus
/// `fields` (quantities) and `field_sources` ("<doc>#r<n>" locators).
/// The first occurrence of a field wins.
Json docpipe_results(const store::UnifiedStore& store, const DocpipeOptions& options);

}  // namespace leedw::docpipe
