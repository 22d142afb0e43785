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
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "leedw/rag/chunker.hpp"
#include "leedw/rag/embed.hpp"

namespace leedw::rag {

struct RetrievalHit {
  std::string chunk_id;
  double score = 0;  // cosine, [-1, 1]
  int rank = 0;      // 1-based
};

using Filter = std::function<bool(const ChunkMetadata&)>;

Filter by_category(std::string category);
/// Matches category, kind and name (case-insensitive).
Filter by_credit(std::string category, std::string kind, std::string credit_name);

/// Exact cosine index. Build first, then search; const members are safe to
/// call concurrently.
class VectorIndex {
 public:
  explicit VectorIndex(int dim = kDefaultDim, std::string embedder_name = {});

  int dim() const { return dim_; }
  size_t size() const { return entries_.size(); }
  const std::string& embedder_name() const { return embedder_name_; }

  /// Normalizes `v`. Throws Error(conflict) for a duplicate chunk id and
  /// Error(validation) for a dimension mismatch.
  void add(CreditChunk chunk, Vector v);
  const CreditChunk* chunk(const std::string& id) const;
  const std::vector<CreditChunk>& chunks() const { return chunks_; }

  /// Top k by descending cosine, ties by ascending chunk id, among entries
  /// passing `filter`.
  std::vector<RetrievalHit> search(const Vector& query, size_t k, const Filter& filter = {}) const;

  /// {version, dim, embedder, entries: [{chunk..., vector}]}
  Json to_json() const;
  static VectorIndex from_json(const Json& j);
  void save(const std::filesystem::path& file) const;
  static VectorIndex load(const std::filesystem::path& file);

 private:
  int dim_;
  std::string embedder_name_;
  std::vector<CreditChunk> chunks_;
  std::vector<Vector> vectors_;
  std::map<std::string, size_t> entries_;
};

/// Throws Error(conflict) naming a duplicate chunk id.
VectorIndex build_index(const std::vector<CreditChunk>& chunks, Embedder& embedder);

/// Embeds the query with the embedder that built the index; a different
/// active embedder raises Error(configuration).
std::vector<RetrievalHit> search_text(const VectorIndex& index, Embedder& embedder, const std::string& query, size_t k,
                                      const Filter& filter = {});

struct KnowledgeBase {
  std::vector<CreditChunk> chunks;
  std::vector<std::string> warnings;
};

/// Chunks every *.md and *.txt file in `dir`, in filename order.
KnowledgeBase load_knowledge_base(const std::filesystem::path& dir);

}  // namespace leedw::rag
