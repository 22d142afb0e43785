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

#include "leedw/reportgen/llm.hpp"

#include <sstream>

#include <json.hpp>

#include "leedw/common/error.hpp"
#include "leedw/common/http.hpp"
#include "leedw/common/util.hpp"
#include "leedw/reportgen/prompt.hpp"

namespace leedw::reportgen {

using nlohmann::json;

HttpLlmClient::HttpLlmClient(std::string url, std::string model, double temperature, std::chrono::milliseconds timeout)
    : url_(std::move(url)), model_(std::move(model)), temperature_(temperature), timeout_(timeout) {}

LlmResponse HttpLlmClient::generate(const std::string& prompt) {
  json body = {{"model", model_},
               {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
               {"temperature", temperature_}};
  const auto res = http::post_json(url_, body.dump(), timeout_);
  if (res.status >= 500) throw Error(ErrorCode::transient, "LLM endpoint returned HTTP " + std::to_string(res.status));
  if (res.status != 200) throw Error(ErrorCode::protocol, "LLM endpoint returned HTTP " + std::to_string(res.status));
  try {
    const auto j = json::parse(res.body);
    LlmResponse out;
    out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    out.model_id = j.contains("model") && j["model"].is_string() ? j["model"].get<std::string>() : model_;
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::protocol, std::string("malformed LLM response: ") + e.what());
  }
}

MockLlmClient::MockLlmClient(Writer writer, std::string model_id) : writer_(std::move(writer)), model_id_(std::move(model_id)) {
  if (!writer_) throw Error(ErrorCode::configuration, "mock LLM client needs a writer");
}

LlmResponse MockLlmClient::generate(const std::string& prompt) { return {writer_(prompt), model_id_}; }

std::string results_summary_writer(const std::string& prompt) {
  const size_t b = prompt.find(kResultsBegin);
  const size_t e = prompt.find(kResultsEnd);
  std::string out;
  if (b != std::string::npos && e != std::string::npos && e > b) {
    std::istringstream in(prompt.substr(b + std::string(kResultsBegin).size(), e - b - std::string(kResultsBegin).size()));
    for (std::string line; std::getline(in, line);) {
      line = trim(line);
      if (line.rfind("- ", 0) != 0) continue;
      const size_t colon = line.find(": ");
      if (colon == std::string::npos) continue;
      out += "The " + line.substr(2, colon - 2) + " is " + line.substr(colon + 2) + ". ";
    }
  }
  if (out.empty()) out = "No project results were available for this credit. ";
  out.pop_back();
  return out;
}

std::string chat_completion_body(const std::string& content, const std::string& model) {
  return json{{"model", model}, {"choices", json::array({{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}})}}
      .dump();
}

}  // namespace leedw::reportgen
