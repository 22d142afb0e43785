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

#include <string>
#include <vector>

namespace leedw::reportgen {

/// Placeholders: {credit_id} {credit_language} {evidence_snippets}
/// {project_results} {instructions}, each exactly once.
struct PromptTemplate {
  std::string text;
  int token_budget = 1500;

  /// Throws Error(validation) naming a placeholder that is absent or repeated.
  void validate() const;
  static PromptTemplate default_template();
};

/// Whitespace-separated token count.
int count_tokens(const std::string& text);

struct Snippet {
  std::string chunk_id;
  std::string text;
  double score = 0;
  int rank = 0;  // 1 = best
};

struct PromptInput {
  std::string credit_id;
  std::string credit_language;
  std::vector<Snippet> snippets;  // any order; inserted by rank
  std::string project_results;
  std::string instructions;
};

struct AssembledPrompt {
  std::string text;
  std::vector<std::string> included;  // chunk ids, rank order
  std::vector<std::string> dropped;
  bool low_evidence = false;
  bool over_budget = false;  // still above budget with no snippets left
  int tokens = 0;
};

/// Fills the template. While the prompt exceeds the budget, the lowest
/// scoring snippet (then the highest rank number) is dropped.
AssembledPrompt assemble_prompt(const PromptTemplate& tmpl, const PromptInput& input);

/// Marker lines around the project results block, used by the mock writer.
inline constexpr const char* kResultsBegin = "<<<PROJECT RESULTS>>>";
inline constexpr const char* kResultsEnd = "<<<END PROJECT RESULTS>>>";

}  // namespace leedw::reportgen
