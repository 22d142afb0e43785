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

#include "leedw/rag/chunker.hpp"

#include <regex>

#include "leedw/common/error.hpp"

namespace leedw::rag {

namespace {

const std::regex& heading_re() {
  static const std::regex re(R"(^(LT|SS|WE|EA|MR|EQ|IN) (Prerequisite|Credit): (\S.*?) \((\d+) points?\)\s*$)");
  return re;
}

const std::regex& heading_like_re() {
  static const std::regex re(R"(^(LT|SS|WE|EA|MR|EQ|IN) (Prerequisite|Credit)\b)");
  return re;
}

}  // namespace

Json CreditChunk::to_json() const {
  return {{"chunk_id", chunk_id},
          {"text", text},
          {"source_doc", source_doc},
          {"metadata",
           {{"category", metadata.category},
            {"credit_name", metadata.credit_name},
            {"point_value", metadata.point_value},
            {"kind", metadata.kind}}}};
}

CreditChunk CreditChunk::from_json(const Json& j) {
  try {
    CreditChunk c;
    c.chunk_id = j.at("chunk_id").get<std::string>();
    c.text = j.at("text").get<std::string>();
    c.source_doc = j.value("source_doc", "");
    const Json& m = j.at("metadata");
    c.metadata.category = m.at("category").get<std::string>();
    c.metadata.credit_name = m.at("credit_name").get<std::string>();
    c.metadata.point_value = m.at("point_value").get<int>();
    c.metadata.kind = m.at("kind").get<std::string>();
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("malformed chunk record: ") + e.what());
  }
}

std::optional<ChunkMetadata> parse_heading(std::string_view line) {
  std::cmatch m;
  if (!std::regex_match(line.begin(), line.end(), m, heading_re())) return std::nullopt;
  ChunkMetadata md;
  md.category = m[1].str();
  md.kind = m[2].str() == "Prerequisite" ? "prerequisite" : "credit";
  md.credit_name = m[3].str();
  try {
    md.point_value = std::stoi(m[4].str());
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return md;
}

ChunkingResult chunk_reference_guide(std::string_view doc, const std::string& source_doc) {
  ChunkingResult out;
  struct Section {
    size_t begin;
    std::optional<ChunkMetadata> meta;  // nullopt: unparseable heading
    size_t line_no;
  };
  std::vector<Section> sections;
  size_t pos = 0, line_no = 1;
  while (pos < doc.size()) {
    size_t end = doc.find('\n', pos);
    const size_t next = end == std::string_view::npos ? doc.size() : end + 1;
    std::string_view line = doc.substr(pos, (end == std::string_view::npos ? doc.size() : end) - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (std::regex_search(line.begin(), line.end(), heading_like_re())) {
      sections.push_back({pos, parse_heading(line), line_no});
    }
    pos = next;
    ++line_no;
  }
  const size_t first = sections.empty() ? doc.size() : sections.front().begin;
  if (first > 0) {
    out.discarded.push_back({std::string(doc.substr(0, first)), "frontmatter", 0});
    out.warnings.push_back(source_doc + ": text before the first credit heading was discarded");
  }
  int n = 0;
  for (size_t i = 0; i < sections.size(); ++i) {
    const size_t end = i + 1 < sections.size() ? sections[i + 1].begin : doc.size();
    std::string text(doc.substr(sections[i].begin, end - sections[i].begin));
    if (!sections[i].meta) {
      out.warnings.push_back(source_doc + ":" + std::to_string(sections[i].line_no) + ": unparseable credit heading, section skipped");
      out.discarded.push_back({std::move(text), "unparseable heading", sections[i].begin});
      continue;
    }
    CreditChunk c;
    c.chunk_id = source_doc + "#" + std::to_string(++n);
    c.text = std::move(text);
    c.metadata = *sections[i].meta;
    c.source_doc = source_doc;
    out.chunks.push_back(std::move(c));
  }
  return out;
}

}  // namespace leedw::rag
