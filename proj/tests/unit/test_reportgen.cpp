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

#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "leedw/common/error.hpp"
#include "leedw/credits/engine.hpp"
#include "leedw/reportgen/report.hpp"
#include "support/report_corpus.hpp"

using namespace leedw;
using namespace leedw::reportgen;

namespace {

std::string data(const std::string& rel) { return std::string(LEEDW_DATA_DIR) + "/" + rel; }

AliasTable aliases() { return load_aliases(data("reports/aliases.json")); }

Snippet snippet(const std::string& id, int words, double score, int rank) {
  std::string text;
  for (int i = 0; i < words; ++i) text += "w ";
  return {id, text, score, rank};
}

PromptInput input_with(std::vector<Snippet> snippets) {
  PromptInput in;
  in.credit_id = "EAc2";
  in.credit_language = "Optimize energy performance.";
  in.snippets = std::move(snippets);
  in.project_results = "- proposed energy use intensity: 120.0 kWh/m2.yr\n";
  in.instructions = "Write one paragraph.";
  return in;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::usage;
}

const VerificationFinding& only(const std::vector<VerificationFinding>& v) {
  REQUIRE(v.size() == 1);
  return v[0];
}

}  // namespace

TEST_CASE("prompt template placeholders") {
  CHECK_NOTHROW(PromptTemplate::default_template().validate());
  PromptTemplate t = PromptTemplate::default_template();
  t.text.replace(t.text.find("{instructions}"), 14, "");
  CHECK(code_of([&] { t.validate(); }) == ErrorCode::validation);
  t = PromptTemplate::default_template();
  t.text += "{credit_id}";
  CHECK(code_of([&] { t.validate(); }) == ErrorCode::validation);
  t = PromptTemplate::default_template();
  t.token_budget = 0;
  CHECK(code_of([&] { t.validate(); }) == ErrorCode::validation);
  CHECK(count_tokens("  a b\n c\t") == 3);
}

TEST_CASE("prompt budget drops the weakest snippets") {
  const auto in = input_with({snippet("c#1", 50, 0.9, 1), snippet("c#2", 50, 0.7, 2), snippet("c#3", 50, 0.7, 3),
                              snippet("c#4", 50, 0.2, 4)});
  auto t = PromptTemplate::default_template();
  const auto full = assemble_prompt(t, in);
  CHECK(full.included == std::vector<std::string>{"c#1", "c#2", "c#3", "c#4"});
  CHECK(full.dropped.empty());
  CHECK(full.text.find(kResultsBegin) != std::string::npos);
  CHECK(full.text.find("120.0 kWh/m2.yr") != std::string::npos);

  t.token_budget = full.tokens - 1;
  auto p = assemble_prompt(t, in);
  CHECK(p.dropped == std::vector<std::string>{"c#4"});
  CHECK(p.tokens <= t.token_budget);
  t.token_budget = full.tokens - 60;
  p = assemble_prompt(t, in);
  // equal scores: the larger rank number goes first
  CHECK(p.dropped == std::vector<std::string>{"c#4", "c#3"});

  // fewer snippets survive as the budget shrinks
  size_t prev = in.snippets.size();
  for (int budget = full.tokens; budget > 0; budget -= 7) {
    t.token_budget = budget;
    p = assemble_prompt(t, in);
    CHECK(p.included.size() <= prev);
    prev = p.included.size();
    CHECK((p.over_budget == (p.tokens > budget)));
    if (!p.over_budget) CHECK(p.tokens <= budget);
  }
  CHECK(p.low_evidence);
  CHECK(p.included.empty());
  CHECK(assemble_prompt(PromptTemplate::default_template(), input_with({})).low_evidence);
}

TEST_CASE("mock writer quotes the results block") {
  const auto p = assemble_prompt(PromptTemplate::default_template(), input_with({}));
  MockLlmClient mock(results_summary_writer);
  const auto r = mock.generate(p.text);
  CHECK(r.text == "The proposed energy use intensity is 120.0 kWh/m2.yr.");
  CHECK(r.model_id == "mock-writer");
  CHECK(results_summary_writer("no block") == "No project results were available for this credit.");
}

TEST_CASE("HTTP LLM client") {
  httplib::Server server;
  std::string seen;
  server.Post("/ok", [&](const httplib::Request& req, httplib::Response& res) {
    seen = req.body;
    res.set_content(chat_completion_body("Drafted.", "served-model"), "application/json");
  });
  server.Post("/down", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  server.Post("/bad", [](const httplib::Request&, httplib::Response& res) { res.set_content("{}", "application/json"); });
  server.Post("/missing", [](const httplib::Request&, httplib::Response& res) { res.status = 404; });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  HttpLlmClient ok(base + "/ok", "writer-1");
  const auto r = ok.generate("hello");
  CHECK(r.text == "Drafted.");
  CHECK(r.model_id == "served-model");
  const auto body = Json::parse(seen);
  CHECK(body["model"] == "writer-1");
  CHECK(body["messages"][0]["content"] == "hello");
  CHECK(body["temperature"] == 0.0);

  HttpLlmClient down(base + "/down", "m");
  try {
    down.generate("x");
    FAIL("expected transient");
  } catch (const Error& e) {
    CHECK(e.transient());
  }
  HttpLlmClient bad(base + "/bad", "m");
  CHECK(code_of([&] { bad.generate("x"); }) == ErrorCode::protocol);
  HttpLlmClient missing(base + "/missing", "m");
  CHECK(code_of([&] { missing.generate("x"); }) == ErrorCode::protocol);
  server.stop();
  t.join();

  HttpLlmClient gone(base + "/ok", "m", 0.0, std::chrono::milliseconds(500));
  try {
    gone.generate("x");
    FAIL("expected transient");
  } catch (const Error& e) {
    CHECK(e.transient());
  }
}

TEST_CASE("claim extraction") {
  const auto c = extract_claims("EAc2 on 2026-10-15: 836,124 kWh, 30% less, 12 points and -4.5 m2 over 3 in total.");
  REQUIRE(c.size() == 5);
  CHECK(c[0].value == 836124);
  CHECK(c[0].unit == "kWh");
  CHECK(c[0].text == "836,124 kWh");
  CHECK(c[1].value == 30);
  CHECK(c[1].unit == "%");
  CHECK(c[2].value == 12);
  CHECK(c[2].unit == "1");
  CHECK(c[3].value == -4.5);
  CHECK(c[3].unit == "m2");
  CHECK(c[4].value == 3);
  CHECK(c[4].unit == "1");  // "in" is read as a word
  CHECK(extract_claims("no numbers here").empty());
  CHECK(extract_claims("120.0 kWh/m2.yr.")[0].unit == "kWh/m2.yr");

  CHECK(format_claim_value(836124.4) == "836,124");
  CHECK(format_claim_value(120) == "120");
  CHECK(format_claim_value(0.3) == "0.3000");
  CHECK(format_claim_value(171.43) == "171.4");
  CHECK(format_claim_value(-1234567) == "-1,234,567");
  for (double v : {0.01234, 3.14159, 27.5, 999.4}) {
    const auto back = extract_claims(format_claim_value(v))[0].value;
    CHECK(std::abs(back - v) / v < 5e-4);
  }
}

TEST_CASE("verify numeric claims against the store") {
  const auto corpus = testing::load_report_corpus(data("reports/verification_corpus.json"));
  const auto& s = corpus.store;
  const auto a = aliases();

  auto f = only(verify_numeric_claims("The proposed energy use intensity is 120.0 kWh/m2.yr.", "EAc2", s, a));
  CHECK(f.verdict == Verdict::pass);
  CHECK(f.store_path == "$.results.energymod.metrics.eui_proposed");

  f = only(verify_numeric_claims("The design achieves a 35% reduction in energy use.", "EAc2", s, a));
  CHECK(f.verdict == Verdict::mismatch);
  CHECK(f.store_path == "$.results.energymod.metrics.energy_reduction");
  CHECK(*f.relative_error == doctest::Approx(1.0 / 6.0));

  f = only(verify_numeric_claims("Proposed annual energy is 836,124 kWh.", "EAc2", s, a));
  CHECK(f.verdict == Verdict::pass);
  f = only(verify_numeric_claims("Proposed annual energy is 836.124 MWh.", "EAc2", s, a));
  CHECK(f.verdict == Verdict::pass);

  // 0.4% off passes at the default tolerance, 0.6% does not
  CHECK(only(verify_numeric_claims("The proposed energy use intensity is 120.5 kWh/m2.yr.", "EAc2", s, a)).verdict ==
        Verdict::pass);
  CHECK(only(verify_numeric_claims("The proposed energy use intensity is 120.7 kWh/m2.yr.", "EAc2", s, a)).verdict ==
        Verdict::mismatch);

  // the neighbouring sentence does not lend its keywords
  const auto two = verify_numeric_claims(
      "The baseline energy use intensity is 171.4 kWh/m2.yr. The proposed energy use intensity is 120.0 kWh/m2.yr.",
      "EAc2", s, a);
  REQUIRE(two.size() == 2);
  CHECK(two[0].store_path == "$.results.energymod.metrics.eui_baseline");
  CHECK(two[1].store_path == "$.results.energymod.metrics.eui_proposed");

  f = only(verify_numeric_claims("The roof holds 42 solar panels.", "EAc2", s, a));
  CHECK(f.verdict == Verdict::unmatched);
  CHECK(f.store_path.empty());
  f = only(verify_numeric_claims("The proposed energy use intensity is 120 m.", "EAc2", s, a));
  CHECK(f.verdict == Verdict::unmatched);

  CHECK(code_of([&] { verify_numeric_claims("x", "EAc2", s, a, 0); }) == ErrorCode::parameter);

  const auto round = VerificationFinding::from_json(two[0].to_json());
  CHECK(round.to_json() == two[0].to_json());
}

TEST_CASE("fixture corpus: clean text passes, perturbations are caught") {
  const auto corpus = testing::load_report_corpus(data("reports/verification_corpus.json"));
  const auto a = aliases();
  size_t claims = 0;
  for (const auto& sec : corpus.sections) {
    for (const auto& f : verify_numeric_claims(sec.text, sec.credit_id, corpus.store, a)) {
      ++claims;
      INFO(sec.credit_id << ": " << f.claim_text << " -> " << f.store_path);
      CHECK(f.verdict == Verdict::pass);
    }
  }
  CHECK(claims >= 20);

  const auto perturbed = testing::seeded_perturbations(corpus, 20, 20261015);
  REQUIRE(perturbed.size() == 20);
  for (const auto& p : perturbed) {
    const auto& sec = corpus.sections[p.section];
    const auto findings = verify_numeric_claims(p.text, sec.credit_id, corpus.store, a);
    REQUIRE(p.claim < findings.size());
    INFO(p.text);
    CHECK(findings[p.claim].verdict != Verdict::pass);
  }
}

TEST_CASE("report assembly, export and patching") {
  auto finding = [](Verdict v) {
    VerificationFinding f;
    f.claim_text = "35%";
    f.value = 35;
    f.unit = "%";
    f.store_path = "$.results.energymod.metrics.energy_reduction";
    f.store_value = 0.3;
    f.store_unit = "1";
    f.relative_error = 1.0 / 6.0;
    f.verdict = v;
    return f;
  };
  DraftSection ea{"EAc2", "EA", "Optimize Energy Performance", "Energy text.", {"kb#9"}, {"$.results.energymod"}, "m", false, {finding(Verdict::pass)}, {}};
  DraftSection lt{"LTc5", "LT", "Access to Quality Transit", "Transit text.", {}, {}, "m", true, {}, {}};
  DraftSection ss{"SSp1", "SS", "Construction Activity Pollution Prevention", "Site text.", {}, {}, "m", false, {}, {}};
  DraftSection lt4{"LTc4", "LT", "Surrounding Density and Diverse Uses", "Uses text.", {}, {}, "m", false, {}, {}};

  auto doc = assemble_report({ea, lt, ss, lt4}, "Demo");
  std::vector<std::string> order;
  for (const auto& s : doc.sections) order.push_back(s.credit_id);
  CHECK(order == std::vector<std::string>{"LTc4", "LTc5", "SSp1", "EAc2"});
  CHECK(doc.status == ReportStatus::verified);
  CHECK(doc.appendix.empty());

  ea.verification.push_back(finding(Verdict::mismatch));
  auto flagged = assemble_report({ss, ea, lt}, "Demo");
  CHECK(flagged.status == ReportStatus::draft);
  REQUIRE(flagged.appendix.size() == 1);
  CHECK(flagged.appendix[0].credit_id == "EAc2");
  const auto md = export_markdown(flagged);
  CHECK(md == export_markdown(assemble_report({lt, ea, ss}, "Demo")));
  CHECK(md.find("Status: draft") != std::string::npos);
  CHECK(md.find("| EAc2 | 35% | $.results.energymod.metrics.energy_reduction | 0.3000 |") != std::string::npos);
  CHECK(md.find("## LTc5 Access to Quality Transit") < md.find("## EAc2"));

  CHECK(code_of([&] { assemble_report({ss, ss}, "Demo"); }) == ErrorCode::conflict);

  patch_section(flagged, "EAc2", "Reviewed text.", "reviewer", "2026-10-15T09:00:00Z");
  const auto* s = flagged.section("EAc2");
  CHECK(s->text == "Reviewed text.");
  REQUIRE(s->history.size() == 1);
  CHECK(s->history[0].text == "Energy text.");
  CHECK(s->history[0].author == "reviewer");
  CHECK(s->verification.size() == 2);
  CHECK(code_of([&] { patch_section(flagged, "XXc9", "t", "a", "now"); }) == ErrorCode::not_found);
  CHECK(code_of([&] { patch_section(flagged, "EAc2", "  ", "a", "now"); }) == ErrorCode::validation);

  const auto back = ReportDocument::from_json(flagged.to_json());
  CHECK(back.to_json() == flagged.to_json());
}

TEST_CASE("report generation over the unified store") {
  auto corpus = testing::load_report_corpus(data("reports/verification_corpus.json"));
  const auto rules = credits::load_rules_dir(data("rules"));
  const auto cr = credits::credits_results(rules, corpus.store);
  // replace the corpus scorecard with one computed by the engine
  Json doc = corpus.store.json();
  doc["results"].erase("credits");
  auto st = store::merge_module_results(store::UnifiedStore::from_json(doc), "credits", Json{{"credits", cr}},
                                        {"credits", "2026-01-01T00:00:00Z"});

  ReportOptions opt;
  opt.rules = rules;
  opt.aliases = aliases();
  const auto kb = rag::load_knowledge_base(data("kb"));
  opt.embedder = std::make_shared<rag::HashEmbedder>(256);
  opt.index = std::make_shared<rag::VectorIndex>(rag::build_index(kb.chunks, *opt.embedder));
  opt.llm = std::make_shared<MockLlmClient>(results_summary_writer);

  const Json out = reportgen_results(st, opt);
  CHECK(out["status"] == "verified");
  CHECK(out["appendix"].empty());
  CHECK(out["sections"].size() == rules.size());
  CHECK(out["sections"][0]["category"] == "LT");
  bool quoted = false;
  for (const auto& s : out["sections"]) {
    CHECK_FALSE(s["provenance"]["chunk_ids"].empty());
    for (const auto& f : s["verification"]) {
      CHECK(f["verdict"] == "pass");
      quoted = true;
    }
  }
  CHECK(quoted);
  CHECK(out == reportgen_results(st, opt));

  const auto merged = store::merge_module_results(st, "reportgen", Json{{"reportgen", out}}, {"reportgen", "t"});
  CHECK(store::validate_store(merged).empty());

  // a writer that inflates every number leaves the report in draft
  opt.llm = std::make_shared<MockLlmClient>([](const std::string& p) {
    std::string t = results_summary_writer(p);
    for (const auto& c : extract_claims(t)) {
      if (c.value != 0) return t.replace(c.offset, c.length, format_claim_value(c.value * 1.1) + " " + c.unit);
    }
    return t;
  });
  const Json bad = reportgen_results(st, opt);
  CHECK(bad["status"] == "draft");
  CHECK_FALSE(bad["appendix"].empty());

  const auto bare = store::UnifiedStore::create(st.project());
  CHECK(code_of([&] { reportgen_results(bare, opt); }) == ErrorCode::missing_input);
  opt.llm = nullptr;
  CHECK(code_of([&] { reportgen_results(st, opt); }) == ErrorCode::configuration);
}
