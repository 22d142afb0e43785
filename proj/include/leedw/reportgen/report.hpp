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

#include <memory>
#include <string>
#include <vector>

#include "leedw/credits/rules.hpp"
#include "leedw/rag/index.hpp"
#include "leedw/reportgen/llm.hpp"
#include "leedw/reportgen/prompt.hpp"
#include "leedw/reportgen/verify.hpp"

namespace leedw::reportgen {

struct Revision {
  std::string text;
  std::string author;
  std::string timestamp;
};

struct DraftSection {
  std::string credit_id;
  std::string category;
  std::string title;
  std::string text;
  std::vector<std::string> chunk_ids;    // provenance: retrieved snippets
  std::vector<std::string> store_paths;  // provenance: quoted results
  std::string model_id;
  bool low_evidence = false;
  std::vector<VerificationFinding> verification;
  std::vector<Revision> history;  // earlier texts, oldest first

  bool has_mismatch() const;
  Json to_json() const;
  static DraftSection from_json(const Json& j);
};

/// Calls the client and wraps the reply; provenance comes from the prompt.
DraftSection generate_section(const AssembledPrompt& prompt, LlmClient& client, const std::string& credit_id,
                              std::vector<std::string> store_paths);

enum class ReportStatus { draft, verified };

std::string_view to_string(ReportStatus s);

struct FindingRef {
  std::string credit_id;
  VerificationFinding finding;
};

struct ReportDocument {
  std::string project_name;
  std::vector<DraftSection> sections;  // LT SS WE EA MR EQ IN, then credit id
  ReportStatus status = ReportStatus::draft;
  std::vector<FindingRef> appendix;    // mismatch findings

  Json to_json() const;
  static ReportDocument from_json(const Json& j);
  DraftSection* section(const std::string& credit_id);
};

/// Orders sections and sets status = verified iff no section has a mismatch.
ReportDocument assemble_report(std::vector<DraftSection> sections, std::string project_name);

/// Markdown with one heading per credit; byte-identical for equal input.
std::string export_markdown(const ReportDocument& doc);

/// Replaces a section's text, keeping the previous text in its history and
/// its verification findings attached. Unknown credit -> Error(not_found).
void patch_section(ReportDocument& doc, const std::string& credit_id, const std::string& text, const std::string& author,
                   const std::string& timestamp);

struct ReportOptions {
  PromptTemplate prompt = PromptTemplate::default_template();
  std::string instructions =
      "Write one paragraph for the submission narrative. Quote every number exactly as given in the project results.";
  credits::RuleSet rules;
  AliasTable aliases;
  std::shared_ptr<const rag::VectorIndex> index;
  std::shared_ptr<rag::Embedder> embedder;
  std::shared_ptr<LlmClient> llm;
  size_t top_k = 3;
  double tolerance = kDefaultTolerance;
};

/// Project-result lines ("- label: value unit") for one credit.
std::vector<std::pair<std::string, std::string>> results_slice(const std::string& credit_id,
                                                               const store::UnifiedStore& store,
                                                               const AliasTable& aliases);

/// The $.results.reportgen subtree: {status, sections, appendix, markdown}.
/// Needs $.results.credits.scorecard.
Json reportgen_results(const store::UnifiedStore& store, const ReportOptions& options);

}  // namespace leedw::reportgen
