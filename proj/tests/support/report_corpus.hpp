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

// Fixture report sections with a store holding every value they quote, plus
// seeded single-number perturbations of them.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "leedw/common/util.hpp"
#include "leedw/datastore/store.hpp"
#include "leedw/reportgen/verify.hpp"

namespace leedw::testing {

struct CorpusSection {
  std::string credit_id;
  std::string text;
};

struct ReportCorpus {
  store::UnifiedStore store;
  std::vector<CorpusSection> sections;
};

inline ReportCorpus load_report_corpus(const std::string& file) {
  const Json j = Json::parse(read_file(file));
  store::ProjectRecord p;
  p.id = "corpus";
  p.name = "Verification Corpus";
  p.floor_area_m2 = 6967.7;
  p.location = {37.5665, 126.978};
  ReportCorpus c{store::UnifiedStore::create(p, j.at("inputs")), {}};
  for (const auto& [module, delta] : j.at("results").items()) {
    c.store = store::merge_module_results(c.store, module, Json{{module, delta}}, {module, "2026-01-01T00:00:00Z"});
  }
  for (const auto& s : j.at("sections")) c.sections.push_back({s.at("credit_id"), s.at("text")});
  return c;
}

struct Perturbation {
  size_t section = 0;
  size_t claim = 0;  // index among the section's claims
  std::string text;  // section text with the one number replaced
  double factor = 1;
};

/// `count` distinct claims, each scaled by a factor at least 2% away from 1.
inline std::vector<Perturbation> seeded_perturbations(const ReportCorpus& c, size_t count, unsigned seed) {
  std::vector<std::pair<size_t, size_t>> all;
  for (size_t s = 0; s < c.sections.size(); ++s) {
    const auto claims = reportgen::extract_claims(c.sections[s].text);
    for (size_t k = 0; k < claims.size(); ++k) all.emplace_back(s, k);
  }
  std::mt19937 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  if (all.size() > count) all.resize(count);
  std::uniform_real_distribution<double> mag(0.02, 0.5);
  std::bernoulli_distribution up(0.5);
  std::vector<Perturbation> out;
  for (const auto& [s, k] : all) {
    const std::string& text = c.sections[s].text;
    const auto claim = reportgen::extract_claims(text)[k];
    const double f = up(rng) ? 1 + mag(rng) : 1 - mag(rng);
    // the number is the claim text up to the first character that cannot
    // belong to it
    size_t n = 0;
    while (n < claim.text.size() && std::string("0123456789,.-+").find(claim.text[n]) != std::string::npos) ++n;
    while (n > 0 && (claim.text[n - 1] == '.' || claim.text[n - 1] == ',')) --n;
    std::string edited = text;
    edited.replace(claim.offset, n, reportgen::format_claim_value(claim.value * f));
    out.push_back({s, k, edited, f});
  }
  return out;
}

}  // namespace leedw::testing
