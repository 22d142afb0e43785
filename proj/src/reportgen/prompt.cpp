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

#include "leedw/reportgen/prompt.hpp"

#include <algorithm>
#include <sstream>

#include "leedw/common/error.hpp"

namespace leedw::reportgen {

namespace {

const char* const kPlaceholders[] = {"{credit_id}", "{credit_language}", "{evidence_snippets}", "{project_results}",
                                     "{instructions}"};

size_t occurrences(const std::string& text, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
  return n;
}

std::string render(const PromptTemplate& tmpl, const PromptInput& in, const std::vector<const Snippet*>& snippets) {
  std::string block;
  if (snippets.empty()) block = "(no reference snippets retrieved)\n";
  for (const Snippet* s : snippets) block += "[" + s->chunk_id + "]\n" + s->text + (s->text.empty() || s->text.back() != '\n' ? "\n" : "");
  // Single left-to-right pass over the template.
  std::string out;
  const std::string& t = tmpl.text;
  size_t pos = 0;
  while (pos < t.size()) {
    size_t best = std::string::npos;
    int which = -1;
    for (int i = 0; i < 5; ++i) {
      size_t p = t.find(kPlaceholders[i], pos);
      if (p < best) {
        best = p;
        which = i;
      }
    }
    if (which < 0) {
      out += t.substr(pos);
      break;
    }
    out += t.substr(pos, best - pos);
    switch (which) {
      case 0: out += in.credit_id; break;
      case 1: out += in.credit_language; break;
      case 2: out += block; break;
      case 3: out += std::string(kResultsBegin) + "\n" + in.project_results + "\n" + kResultsEnd; break;
      case 4: out += in.instructions; break;
    }
    pos = best + std::string(kPlaceholders[which]).size();
  }
  return out;
}

}  // namespace

void PromptTemplate::validate() const {
  std::vector<std::string> problems;
  for (const char* p : kPlaceholders) {
    const size_t n = occurrences(text, p);
    if (n != 1) problems.push_back(std::string(p) + (n == 0 ? " is missing" : " appears more than once"));
  }
  if (token_budget <= 0) problems.push_back("token_budget must be > 0");
  if (!problems.empty()) throw Error(ErrorCode::validation, "invalid prompt template: " + problems.front(), problems);
}

PromptTemplate PromptTemplate::default_template() {
  return {"You are drafting one section of a green-building certification submission.\n"
          "Credit: {credit_id}\n"
          "Requirement summary:\n{credit_language}\n\n"
          "Reference excerpts:\n{evidence_snippets}\n"
          "Project results (authoritative; quote numbers exactly):\n{project_results}\n\n"
          "{instructions}\n",
          1500};
}

int count_tokens(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

AssembledPrompt assemble_prompt(const PromptTemplate& tmpl, const PromptInput& input) {
  tmpl.validate();
  std::vector<const Snippet*> kept;
  for (const auto& s : input.snippets) kept.push_back(&s);
  std::sort(kept.begin(), kept.end(), [](const Snippet* a, const Snippet* b) {
    return a->rank != b->rank ? a->rank < b->rank : a->chunk_id < b->chunk_id;
  });
  AssembledPrompt out;
  out.text = render(tmpl, input, kept);
  out.tokens = count_tokens(out.text);
  while (out.tokens > tmpl.token_budget && !kept.empty()) {
    auto worst = std::min_element(kept.begin(), kept.end(), [](const Snippet* a, const Snippet* b) {
      if (a->score != b->score) return a->score < b->score;
      return a->rank > b->rank;
    });
    out.dropped.push_back((*worst)->chunk_id);
    kept.erase(worst);
    out.text = render(tmpl, input, kept);
    out.tokens = count_tokens(out.text);
  }
  for (const Snippet* s : kept) out.included.push_back(s->chunk_id);
  out.low_evidence = kept.empty();
  out.over_budget = out.tokens > tmpl.token_budget;
  return out;
}

}  // namespace leedw::reportgen
