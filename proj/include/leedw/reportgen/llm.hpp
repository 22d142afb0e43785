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
#include <functional>
#include <string>

namespace leedw::reportgen {

struct LlmResponse {
  std::string text;
  std::string model_id;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string name() const = 0;
  /// HTTP 5xx and timeouts raise Error(transient); a malformed body raises
  /// Error(protocol).
  virtual LlmResponse generate(const std::string& prompt) = 0;
};

/// Chat-completion endpoint: POST {model, messages, temperature} to `url`,
/// reading choices[0].message.content.
class HttpLlmClient : public LlmClient {
 public:
  HttpLlmClient(std::string url, std::string model, double temperature = 0.0,
                std::chrono::milliseconds timeout = std::chrono::seconds(120));
  std::string name() const override { return "http:" + model_; }
  LlmResponse generate(const std::string& prompt) override;

 private:
  std::string url_;
  std::string model_;
  double temperature_;
  std::chrono::milliseconds timeout_;
};

/// In-process client returning canned text.
class MockLlmClient : public LlmClient {
 public:
  using Writer = std::function<std::string(const std::string& prompt)>;
  explicit MockLlmClient(Writer writer, std::string model_id = "mock-writer");
  std::string name() const override { return "mock:" + model_id_; }
  LlmResponse generate(const std::string& prompt) override;

 private:
  Writer writer_;
  std::string model_id_;
};

/// Deterministic stand-in for a language model. Reads the project results
/// block of the prompt (see kResultsBegin) and writes one sentence per value,
/// quoting numbers to four significant figures.
std::string results_summary_writer(const std::string& prompt);

/// Body of a chat-completion response carrying `content`.
std::string chat_completion_body(const std::string& content, const std::string& model);

}  // namespace leedw::reportgen
