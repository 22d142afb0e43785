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

#include "leedw/rag/embed.hpp"

#include <cmath>
#include <map>

#include <json.hpp>

#include "leedw/common/error.hpp"
#include "leedw/common/http.hpp"
#include "leedw/common/util.hpp"

namespace leedw::rag {

void normalize(Vector& v) {
  double n2 = 0;
  for (double x : v) n2 += x * x;
  const double n = std::sqrt(n2);
  if (!(n > 0) || !std::isfinite(n)) throw Error(ErrorCode::validation, "cannot normalize a zero or non-finite vector");
  for (double& x : v) x /= n;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::validation, "vector dimensions differ");
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      cur.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

HashEmbedder::HashEmbedder(int dim) : dim_(dim) {
  if (dim <= 0) throw Error(ErrorCode::parameter, "embedding dim must be > 0");
}

size_t HashEmbedder::bucket(const std::string& token) const { return fnv1a64(token) % static_cast<size_t>(dim_); }

std::vector<Vector> HashEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    std::map<std::string, int> tf;
    for (auto& tok : tokenize(t)) ++tf[tok];
    if (tf.empty()) throw Error(ErrorCode::validation, "text has no tokens to embed");
    Vector v(dim_, 0.0);
    for (const auto& [tok, n] : tf) v[bucket(tok)] += 1.0 + std::log(static_cast<double>(n));
    normalize(v);
    out.push_back(std::move(v));
  }
  return out;
}

HttpEmbedder::HttpEmbedder(std::string url, std::string model, int dim, std::chrono::milliseconds timeout)
    : url_(std::move(url)), model_(std::move(model)), dim_(dim), timeout_(timeout) {}

std::vector<Vector> HttpEmbedder::embed(const std::vector<std::string>& texts) {
  nlohmann::json body = {{"model", model_}, {"input", texts}};
  const auto res = http::post_json(url_, body.dump(), timeout_);
  if (res.status >= 500) throw Error(ErrorCode::transient, "embedding endpoint returned HTTP " + std::to_string(res.status));
  if (res.status != 200) throw Error(ErrorCode::protocol, "embedding endpoint returned HTTP " + std::to_string(res.status));
  std::vector<Vector> out;
  try {
    const auto j = nlohmann::json::parse(res.body);
    const auto& data = j.at("data");
    if (data.size() != texts.size()) throw Error(ErrorCode::protocol, "embedding endpoint returned the wrong number of vectors");
    for (const auto& d : data) {
      Vector v = d.at("embedding").get<Vector>();
      if (static_cast<int>(v.size()) != dim_) {
        throw Error(ErrorCode::protocol, "embedding has dim " + std::to_string(v.size()) + ", expected " + std::to_string(dim_));
      }
      normalize(v);
      out.push_back(std::move(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::protocol, std::string("malformed embedding response: ") + e.what());
  }
  return out;
}

ResilientEmbedder::ResilientEmbedder(std::shared_ptr<Embedder> primary, std::shared_ptr<Embedder> fallback)
    : primary_(std::move(primary)), fallback_(std::move(fallback)) {
  if (!primary_ || !fallback_) throw Error(ErrorCode::configuration, "resilient embedder needs two embedders");
}

std::vector<Vector> ResilientEmbedder::embed(const std::vector<std::string>& texts) {
  if (!degraded_) {
    try {
      return primary_->embed(texts);
    } catch (const Error& e) {
      if (!e.transient()) throw;
      degraded_ = true;
    }
  }
  return fallback_->embed(texts);
}

}  // namespace leedw::rag
