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

#include "leedw/reportgen/report.hpp"

#include <algorithm>
#include <set>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::reportgen {

namespace {

std::vector<std::string> strings(const Json& j, const char* key) {
  std::vector<std::string> out;
  for (const auto& s : j.value(key, Json::array())) out.push_back(s.get<std::string>());
  return out;
}

int section_rank(const DraftSection& s) {
  const auto c = credits::parse_category(s.category);
  return c ? credits::category_rank(*c) : 1000;
}

std::string unit_suffix(const std::string& unit) {
  if (unit == "1") return "";
  if (unit == "%") return "%";
  return " " + unit;
}

bool alias_applies(const Alias& a, const std::string& credit_id, const std::set<std::string>& evidence) {
  for (const auto& c : a.credits) {
    if (c == "*" || c == credit_id) return true;
  }
  return evidence.count(a.path) > 0;
}

}  // namespace

bool DraftSection::has_mismatch() const {
  return std::any_of(verification.begin(), verification.end(),
                     [](const VerificationFinding& f) { return f.verdict == Verdict::mismatch; });
}

Json DraftSection::to_json() const {
  Json findings = Json::array();
  for (const auto& f : verification) findings.push_back(f.to_json());
  Json revisions = Json::array();
  for (const auto& r : history) revisions.push_back({{"text", r.text}, {"author", r.author}, {"timestamp", r.timestamp}});
  return {{"credit_id", credit_id},
          {"category", category},
          {"title", title},
          {"text", text},
          {"provenance", {{"chunk_ids", chunk_ids}, {"store_paths", store_paths}, {"model_id", model_id}}},
          {"low_evidence", low_evidence},
          {"verification", findings},
          {"revisions", revisions}};
}

DraftSection DraftSection::from_json(const Json& j) {
  DraftSection s;
  try {
    s.credit_id = j.at("credit_id").get<std::string>();
    s.category = j.value("category", "");
    s.title = j.value("title", "");
    s.text = j.at("text").get<std::string>();
    if (j.contains("provenance")) {
      const auto& p = j["provenance"];
      s.chunk_ids = strings(p, "chunk_ids");
      s.store_paths = strings(p, "store_paths");
      s.model_id = p.value("model_id", "");
    }
    s.low_evidence = j.value("low_evidence", false);
    for (const auto& f : j.value("verification", Json::array())) s.verification.push_back(VerificationFinding::from_json(f));
    for (const auto& r : j.value("revisions", Json::array())) {
      s.history.push_back({r.at("text").get<std::string>(), r.value("author", ""), r.value("timestamp", "")});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("malformed report section: ") + e.what());
  }
  return s;
}

DraftSection generate_section(const AssembledPrompt& prompt, LlmClient& client, const std::string& credit_id,
                              std::vector<std::string> store_paths) {
  auto reply = client.generate(prompt.text);
  DraftSection s;
  s.credit_id = credit_id;
  s.text = trim(reply.text);
  s.chunk_ids = prompt.included;
  s.store_paths = std::move(store_paths);
  s.model_id = reply.model_id;
  s.low_evidence = prompt.low_evidence;
  return s;
}

std::string_view to_string(ReportStatus s) { return s == ReportStatus::verified ? "verified" : "draft"; }

Json ReportDocument::to_json() const {
  Json secs = Json::array();
  for (const auto& s : sections) secs.push_back(s.to_json());
  Json app = Json::array();
  for (const auto& a : appendix) app.push_back({{"credit_id", a.credit_id}, {"finding", a.finding.to_json()}});
  return {{"project_name", project_name}, {"status", to_string(status)}, {"sections", secs}, {"appendix", app}};
}

ReportDocument ReportDocument::from_json(const Json& j) {
  std::vector<DraftSection> secs;
  try {
    for (const auto& s : j.at("sections")) secs.push_back(DraftSection::from_json(s));
    return assemble_report(std::move(secs), j.value("project_name", ""));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("malformed report: ") + e.what());
  }
}

DraftSection* ReportDocument::section(const std::string& credit_id) {
  for (auto& s : sections) {
    if (s.credit_id == credit_id) return &s;
  }
  return nullptr;
}

ReportDocument assemble_report(std::vector<DraftSection> sections, std::string project_name) {
  std::stable_sort(sections.begin(), sections.end(), [](const DraftSection& a, const DraftSection& b) {
    const int ra = section_rank(a), rb = section_rank(b);
    return ra != rb ? ra < rb : a.credit_id < b.credit_id;
  });
  for (size_t i = 1; i < sections.size(); ++i) {
    if (sections[i].credit_id == sections[i - 1].credit_id) {
      throw Error(ErrorCode::conflict, "duplicate report section " + sections[i].credit_id);
    }
  }
  ReportDocument doc;
  doc.project_name = std::move(project_name);
  doc.sections = std::move(sections);
  for (const auto& s : doc.sections) {
    for (const auto& f : s.verification) {
      if (f.verdict == Verdict::mismatch) doc.appendix.push_back({s.credit_id, f});
    }
  }
  doc.status = doc.appendix.empty() ? ReportStatus::verified : ReportStatus::draft;
  return doc;
}

std::string export_markdown(const ReportDocument& doc) {
  std::string md = "# " + (doc.project_name.empty() ? std::string("Project") : doc.project_name) + " certification narrative\n\n";
  md += "Status: " + std::string(to_string(doc.status)) + "\n";
  for (const auto& s : doc.sections) {
    md += "\n## " + s.credit_id + (s.title.empty() ? "" : " " + s.title) + "\n\n";
    md += s.text + "\n\n";
    std::string src;
    for (const auto& c : s.chunk_ids) src += (src.empty() ? "" : ", ") + c;
    for (const auto& p : s.store_paths) src += (src.empty() ? "" : ", ") + p;
    md += "Sources: " + (src.empty() ? std::string("none") : src) + "\n";
    if (!s.model_id.empty()) md += "Model: " + s.model_id + "\n";
    if (s.low_evidence) md += "Low evidence: no reference guide excerpts were available.\n";
    if (!s.history.empty()) {
      const auto& last = s.history.back();
      md += "Revised " + std::to_string(s.history.size()) + " time(s), last by " + last.author + " at " + last.timestamp + "\n";
    }
  }
  md += "\n## Verification appendix\n\n";
  if (doc.appendix.empty()) {
    md += "All numeric claims matched the project results.\n";
    return md;
  }
  md += "| Credit | Claim | Store path | Store value | Relative error |\n|---|---|---|---|---|\n";
  for (const auto& a : doc.appendix) {
    const auto& f = a.finding;
    md += "| " + a.credit_id + " | " + f.claim_text + " | " + f.store_path + " | " +
          (f.store_value ? format_claim_value(*f.store_value) + unit_suffix(f.store_unit) : std::string("-")) + " | " +
          (f.relative_error ? format_number(*f.relative_error) : std::string("-")) + " |\n";
  }
  return md;
}

void patch_section(ReportDocument& doc, const std::string& credit_id, const std::string& text, const std::string& author,
                   const std::string& timestamp) {
  DraftSection* s = doc.section(credit_id);
  if (!s) throw Error(ErrorCode::not_found, "no report section for " + credit_id);
  if (trim(text).empty()) throw Error(ErrorCode::validation, "section text must not be empty");
  s->history.push_back({s->text, author, timestamp});
  s->text = text;
}

std::vector<std::pair<std::string, std::string>> results_slice(const std::string& credit_id,
                                                               const store::UnifiedStore& store,
                                                               const AliasTable& aliases) {
  std::set<std::string> evidence;
  const auto card = store::query_path(store, "$.results.credits.scorecard.credits." + credit_id);
  if (card) {
    for (const auto& e : card->value.value("evidence", Json::array())) evidence.insert(e.value("locator", ""));
  }
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  for (const auto& a : aliases) {
    if (!alias_applies(a, credit_id, evidence)) continue;
    std::string path = a.path;
    const std::string key = "{credit_id}";
    for (size_t p = path.find(key); p != std::string::npos; p = path.find(key)) path.replace(p, key.size(), credit_id);
    if (!seen.insert(path).second) continue;
    const auto hit = store::query_path(store, path);
    if (!hit || !hit->quantity) continue;
    out.emplace_back(path, "- " + a.label + ": " + format_claim_value(hit->quantity->value) + unit_suffix(hit->quantity->unit));
  }
  return out;
}

Json reportgen_results(const store::UnifiedStore& store, const ReportOptions& options) {
  const auto card = store::query_path(store, "$.results.credits.scorecard.credits");
  if (!card || !card->value.is_object()) {
    throw Error(ErrorCode::missing_input, "report generation needs $.results.credits.scorecard");
  }
  if (!options.llm) throw Error(ErrorCode::configuration, "report generation needs a language model client");
  options.prompt.validate();

  std::vector<DraftSection> sections;
  for (const auto& [credit_id, result] : card->value.items()) {
    const auto rule = options.rules.find(credit_id);
    if (rule == options.rules.end()) throw Error(ErrorCode::configuration, "no rule for scorecard credit " + credit_id);
    const auto& r = rule->second;

    PromptInput in;
    in.credit_id = credit_id;
    in.credit_language = r.name + ". " + r.description;
    in.instructions = options.instructions;
    if (options.index && options.embedder) {
      const std::string cat(credits::to_string(r.category));
      const std::string query = r.name + " " + r.description;
      auto hits = rag::search_text(*options.index, *options.embedder, query, options.top_k,
                                   rag::by_credit(cat, std::string(credits::to_string(r.kind)), r.name));
      if (hits.empty()) hits = rag::search_text(*options.index, *options.embedder, query, options.top_k, rag::by_category(cat));
      for (const auto& h : hits) in.snippets.push_back({h.chunk_id, options.index->chunk(h.chunk_id)->text, h.score, h.rank});
    }
    std::vector<std::string> paths;
    std::string lines = "- status: " + result.value("status", std::string("indeterminate")) + "\n";
    for (const auto& [path, line] : results_slice(credit_id, store, options.aliases)) {
      paths.push_back(path);
      lines += line + "\n";
    }
    in.project_results = lines;

    const auto prompt = assemble_prompt(options.prompt, in);
    auto s = generate_section(prompt, *options.llm, credit_id, std::move(paths));
    s.category = std::string(credits::to_string(r.category));
    s.title = r.name;
    s.verification = verify_numeric_claims(s.text, credit_id, store, options.aliases, options.tolerance);
    sections.push_back(std::move(s));
  }
  const auto doc = assemble_report(std::move(sections), store.project().name);
  Json out = doc.to_json();
  out["markdown"] = export_markdown(doc);
  return out;
}

}  // namespace leedw::reportgen
