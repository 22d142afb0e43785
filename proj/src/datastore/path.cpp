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

#include "leedw/datastore/path.hpp"

#include <cctype>

#include "leedw/common/error.hpp"

namespace leedw::store {

namespace {

bool key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':';
}

[[noreturn]] void malformed(std::string_view text, std::string_view why) {
  throw Error(ErrorCode::malformed_path,
              "malformed path '" + std::string(text) + "': " + std::string(why));
}

}  // namespace

Path Path::parse(std::string_view text) {
  if (text.empty() || text[0] != '$') malformed(text, "must start with '$'");
  Path p;
  size_t i = 1;
  while (i < text.size()) {
    if (text[i] == '.') {
      size_t start = ++i;
      while (i < text.size() && key_char(text[i])) ++i;
      if (i == start) malformed(text, "empty key");
      p.segments_.emplace_back(std::string(text.substr(start, i - start)));
    } else if (text[i] == '[') {
      size_t start = ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start || i >= text.size() || text[i] != ']') malformed(text, "bad index");
      p.segments_.emplace_back(static_cast<size_t>(std::stoull(std::string(text.substr(start, i - start)))));
      ++i;
    } else {
      malformed(text, "unexpected character");
    }
  }
  return p;
}

std::string Path::str() const {
  std::string out = "$";
  for (const auto& seg : segments_) {
    if (const auto* key = std::get_if<std::string>(&seg)) {
      out += '.';
      out += *key;
    } else {
      out += '[' + std::to_string(std::get<size_t>(seg)) + ']';
    }
  }
  return out;
}

Path Path::child(std::string key) const {
  Path p = *this;
  p.segments_.emplace_back(std::move(key));
  return p;
}

Path Path::index(std::size_t i) const {
  Path p = *this;
  p.segments_.emplace_back(i);
  return p;
}

bool Path::within(const Path& other) const {
  if (other.segments_.size() > segments_.size()) return false;
  for (size_t i = 0; i < other.segments_.size(); ++i) {
    if (!(segments_[i] == other.segments_[i])) return false;
  }
  return true;
}

const nlohmann::json* Path::find(const nlohmann::json& root) const {
  const nlohmann::json* node = &root;
  for (const auto& seg : segments_) {
    if (const auto* key = std::get_if<std::string>(&seg)) {
      if (!node->is_object()) return nullptr;
      auto it = node->find(*key);
      if (it == node->end()) return nullptr;
      node = &*it;
    } else {
      const size_t i = std::get<size_t>(seg);
      if (!node->is_array() || i >= node->size()) return nullptr;
      node = &(*node)[i];
    }
  }
  return node;
}

nlohmann::json& Path::ensure(nlohmann::json& root) const {
  nlohmann::json* node = &root;
  for (const auto& seg : segments_) {
    if (const auto* key = std::get_if<std::string>(&seg)) {
      if (node->is_null()) *node = nlohmann::json::object();
      if (!node->is_object()) {
        throw Error(ErrorCode::validation, "path " + str() + " crosses a non-object");
      }
      node = &(*node)[*key];
    } else {
      const size_t i = std::get<size_t>(seg);
      if (!node->is_array() || i >= node->size()) {
        throw Error(ErrorCode::validation, "path " + str() + " indexes past an array end");
      }
      node = &(*node)[i];
    }
  }
  return *node;
}

}  // namespace leedw::store
