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

#include <chrono>
#include <memory>
#include <string>
#include <vector>

namespace leedw::rag {

using Vector = std::vector<double>;

inline constexpr int kDefaultDim = 384;

/// Scales to unit L2 norm. Throws Error(validation) for a zero or
/// non-finite vector.
void normalize(Vector& v);
double dot(const Vector& a, const Vector& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  /// One unit-norm vector per text.
  virtual std::vector<Vector> embed(const std::vector<std::string>& texts) = 0;
};

/// Lowercased runs of letters, digits and non-ASCII bytes.
std::vector<std::string> tokenize(const std::string& text);

/// Deterministic offline embedder: each token hashes (FNV-1a) into one of
/// `dim` buckets, weighted 1 + ln(tf), then L2-normalized. Text without
/// tokens is an Error(validation).
class HashEmbedder : public Embedder {
 public:
  explicit HashEmbedder(int dim = kDefaultDim);
  std::string name() const override { return "hash-" + std::to_string(dim_); }
  int dim() const override { return dim_; }
  std::vector<Vector> embed(const std::vector<std::string>& texts) override;
  size_t bucket(const std::string& token) const;

 private:
  int dim_;
};

/// POST {model, input: [texts]} -> {data: [{embedding: [...]}, ...]}.
/// Connection failures and 5xx are transient; bad bodies are protocol errors.
class HttpEmbedder : public Embedder {
 public:
  HttpEmbedder(std::string url, std::string model, int dim,
               std::chrono::milliseconds timeout = std::chrono::seconds(30));
  std::string name() const override { return "http:" + model_; }
  int dim() const override { return dim_; }
  std::vector<Vector> embed(const std::vector<std::string>& texts) override;

 private:
  std::string url_;
  std::string model_;
  int dim_;
  std::chrono::milliseconds timeout_;
};

/// Uses `primary` until it fails transiently, then switches to `fallback`
/// for good, so every vector in an index comes from one embedder.
class ResilientEmbedder : public Embedder {
 public:
  ResilientEmbedder(std::shared_ptr<Embedder> primary, std::shared_ptr<Embedder> fallback);
  std::string name() const override { return active().name(); }
  int dim() const override { return active().dim(); }
  std::vector<Vector> embed(const std::vector<std::string>& texts) override;
  bool degraded() const { return degraded_; }

 private:
  Embedder& active() const { return degraded_ ? *fallback_ : *primary_; }
  std::shared_ptr<Embedder> primary_;
  std::shared_ptr<Embedder> fallback_;
  bool degraded_ = false;
};

}  // namespace leedw::rag
