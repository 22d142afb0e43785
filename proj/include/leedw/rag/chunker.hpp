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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace leedw::rag {

using Json = nlohmann::json;

struct ChunkMetadata {
  std::string category;     // LT, SS, WE, EA, MR, EQ, IN
  std::string credit_name;
  int point_value = 0;
  std::string kind;         // prerequisite | credit

  bool operator==(const ChunkMetadata&) const = default;
};

struct CreditChunk {
  std::string chunk_id;
  std::string text;  // heading line through the byte before the next heading
  ChunkMetadata metadata;
  std::string source_doc;

  Json to_json() const;
  static CreditChunk from_json(const Json& j);
  bool operator==(const CreditChunk&) const = default;
};

/// Text that did not become a chunk.
struct Discarded {
  std::string text;
  std::string reason;  // "frontmatter" or "unparseable heading"
  size_t offset = 0;   // byte offset in the source document
};

struct ChunkingResult {
  std::vector<CreditChunk> chunks;
  std::vector<Discarded> discarded;
  std::vector<std::string> warnings;
};

/// Parses "<CATEGORY> <Prerequisite|Credit>: <Name> (<N> point[s])".
std::optional<ChunkMetadata> parse_heading(std::string_view line);

/// Splits a reference document into one chunk per credit heading. A line
/// that starts like a heading but does not parse is reported and its section
/// is discarded. Chunk ids are "<source_doc>#<n>", n counting from 1.
ChunkingResult chunk_reference_guide(std::string_view doc, const std::string& source_doc);

}  // namespace leedw::rag
