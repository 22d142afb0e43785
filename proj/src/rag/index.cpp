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

#include "leedw/rag/index.hpp"

#include <algorithm>
#include <cmath>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::rag {

namespace {
constexpr int kIndexVersion = 1;
}

Filter by_category(std::string category) {
  return [category = std::move(category)](const ChunkMetadata& m) { return m.category == category; };
}

Filter by_credit(std::string category, std::string kind, std::string credit_name) {
  return [category = std::move(category), kind = std::move(kind), name = to_lower(credit_name)](const ChunkMetadata& m) {
    return m.category == category && m.kind == kind && to_lower(m.credit_name) == name;
  };
}

VectorIndex::VectorIndex(int dim, std::string embedder_name) : dim_(dim), embedder_name_(std::move(embedder_name)) {
  if (dim <= 0) throw Error(ErrorCode::parameter, "index dim must be > 0");
}

void VectorIndex::add(CreditChunk chunk, Vector v) {
  if (entries_.count(chunk.chunk_id)) throw Error(ErrorCode::conflict, "duplicate chunk id " + chunk.chunk_id);
  if (static_cast<int>(v.size()) != dim_) {
    throw Error(ErrorCode::validation, "vector for " + chunk.chunk_id + " has dim " + std::to_string(v.size()) +
                                           ", index dim is " + std::to_string(dim_));
  }
  normalize(v);
  entries_[chunk.chunk_id] = chunks_.size();
  chunks_.push_back(std::move(chunk));
  vectors_.push_back(std::move(v));
}

const CreditChunk* VectorIndex::chunk(const std::string& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &chunks_[it->second];
}

std::vector<RetrievalHit> VectorIndex::search(const Vector& query, size_t k, const Filter& filter) const {
  if (k == 0) throw Error(ErrorCode::parameter, "k must be >= 1");
  if (static_cast<int>(query.size()) != dim_) throw Error(ErrorCode::validation, "query dim does not match the index");
  Vector q = query;
  normalize(q);
  std::vector<RetrievalHit> all;
  for (size_t i = 0; i < chunks_.size(); ++i) {
    if (filter && !filter(chunks_[i].metadata)) continue;
    all.push_back({chunks_[i].chunk_id, std::clamp(dot(q, vectors_[i]), -1.0, 1.0), 0});
  }
  auto better = [](const RetrievalHit& a, const RetrievalHit& b) {
    return a.score != b.score ? a.score > b.score : a.chunk_id < b.chunk_id;
  };
  const size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + n, all.end(), better);
  all.resize(n);
  for (size_t i = 0; i < n; ++i) all[i].rank = static_cast<int>(i + 1);
  return all;
}

Json VectorIndex::to_json() const {
  Json entries = Json::array();
  for (size_t i = 0; i < chunks_.size(); ++i) {
    Json e = chunks_[i].to_json();
    e["vector"] = vectors_[i];
    entries.push_back(std::move(e));
  }
  return {{"version", kIndexVersion}, {"dim", dim_}, {"embedder", embedder_name_}, {"entries", entries}};
}

VectorIndex VectorIndex::from_json(const Json& j) {
  if (!j.is_object() || j.value("version", 0) != kIndexVersion) {
    throw Error(ErrorCode::unsupported_version, "index file version is not " + std::to_string(kIndexVersion));
  }
  VectorIndex idx(j.at("dim").get<int>(), j.value("embedder", ""));
  for (const auto& e : j.at("entries")) {
    idx.add(CreditChunk::from_json(e), e.at("vector").get<Vector>());
  }
  return idx;
}

void VectorIndex::save(const std::filesystem::path& file) const { write_file_atomic(file, to_json().dump() + "\n"); }

VectorIndex VectorIndex::load(const std::filesystem::path& file) {
  try {
    return from_json(Json::parse(read_file(file)));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse, file.string() + ": " + e.what());
  }
}

VectorIndex build_index(const std::vector<CreditChunk>& chunks, Embedder& embedder) {
  std::vector<std::string> texts;
  texts.reserve(chunks.size());
  for (const auto& c : chunks) texts.push_back(c.text);
  std::vector<Vector> vectors;
  if (!texts.empty()) vectors = embedder.embed(texts);
  VectorIndex idx(embedder.dim(), embedder.name());
  for (size_t i = 0; i < chunks.size(); ++i) idx.add(chunks[i], std::move(vectors[i]));
  return idx;
}

std::vector<RetrievalHit> search_text(const VectorIndex& index, Embedder& embedder, const std::string& query, size_t k,
                                      const Filter& filter) {
  auto v = embedder.embed({query});
  if (embedder.name() != index.embedder_name()) {
    throw Error(ErrorCode::configuration,
                "query embedder " + embedder.name() + " differs from index embedder " + index.embedder_name());
  }
  return index.search(v.front(), k, filter);
}

KnowledgeBase load_knowledge_base(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::not_found, "knowledge base directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".md" || ext == ".txt")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  KnowledgeBase kb;
  for (const auto& f : files) {
    auto r = chunk_reference_guide(read_file(f), f.filename().string());
    for (auto& c : r.chunks) kb.chunks.push_back(std::move(c));
    for (auto& w : r.warnings) kb.warnings.push_back(std::move(w));
  }
  return kb;
}

}  // namespace leedw::rag
