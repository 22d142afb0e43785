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

#include <cmath>
#include <map>
#include <random>

#include "leedw/common/error.hpp"
#include "leedw/docpipe/ocr.hpp"
#include "leedw/docpipe/results.hpp"

using namespace leedw;
using namespace leedw::docpipe;

namespace {

void fill_rect(RasterPage& p, const Box& b, float v) {
  for (int y = b.y; y < b.bottom(); ++y) {
    for (int x = b.x; x < b.right(); ++x) p.at(x, y) = v;
  }
}

BinaryImage random_binary(std::mt19937& rng, int w, int h, double density) {
  std::bernoulli_distribution on(density);
  BinaryImage img = BinaryImage::blank(w, h);
  for (auto& b : img.bits) b = on(rng);
  return img;
}

// Flood fill written independently of the library: recursive DFS over a
// label grid, returns number of components and their areas.
void flood(const BinaryImage& img, std::vector<int>& lab, int x, int y, int l, int conn, long& area) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  if (!img.at(x, y) || lab[y * img.width + x]) return;
  lab[y * img.width + x] = l;
  ++area;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      if (conn == 4 && dx != 0 && dy != 0) continue;
      flood(img, lab, x + dx, y + dy, l, conn, area);
    }
  }
}

}  // namespace

TEST_CASE("gaussian kernel and blur") {
  for (double s : {0.5, 1.0, 2.0}) {
    double sum = 0;
    for (double w : gaussian_kernel(s)) sum += w;
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  CHECK(gaussian_kernel(1.0).size() == 7);
  CHECK_THROWS_AS(gaussian_kernel(0.0), Error);

  auto flat = RasterPage::filled(20, 15, 77.0f);
  CHECK(gaussian_blur(flat, 1.5).pixels == flat.pixels);

  // Impulse: center keeps (w0 / sum)^2 of its value.
  auto impulse = RasterPage::filled(21, 21, 0.0f);
  impulse.at(10, 10) = 255.0f;
  double sum = 0;
  for (int d = -3; d <= 3; ++d) sum += std::exp(-d * d / 2.0);
  const double center = 255.0 / (sum * sum);
  auto blurred = gaussian_blur(impulse, 1.0);
  CHECK(blurred.at(10, 10) == doctest::Approx(center).epsilon(1e-6));
  double mass = 0;
  for (float v : blurred.pixels) mass += v;
  CHECK(std::abs(mass - 255.0) / 255.0 < 1e-6);
}

TEST_CASE("adaptive threshold") {
  auto flat = RasterPage::filled(16, 16, 128.0f);
  CHECK(adaptive_threshold(flat, 15, 5).count() == 0);
  CHECK_THROWS_AS(adaptive_threshold(flat, 4, 5), Error);
  CHECK_THROWS_AS(adaptive_threshold(flat, 1, 5), Error);

  auto stroke = RasterPage::filled(40, 30, 255.0f);
  fill_rect(stroke, {5, 14, 30, 3}, 0.0f);
  auto bin = adaptive_threshold(stroke, 15, 5);
  // Brute-force local mean per pixel with edge replication.
  for (int y = 0; y < stroke.height; ++y) {
    for (int x = 0; x < stroke.width; ++x) {
      double acc = 0;
      for (int dy = -7; dy <= 7; ++dy) {
        for (int dx = -7; dx <= 7; ++dx) acc += stroke.clamped(x + dx, y + dy);
      }
      CHECK(bin.at(x, y) == (stroke.at(x, y) < acc / 225.0 - 5));
    }
  }
  for (int x = 5; x < 35; ++x) CHECK(bin.at(x, 15));
  CHECK(default_window(600) == 31);
  CHECK(default_window(300) % 2 == 1);
}

TEST_CASE("morphological opening") {
  auto single = BinaryImage::blank(9, 9);
  single.set(4, 4, true);
  CHECK(morphological_open(single, 3, 3).count() == 0);

  auto block = BinaryImage::blank(20, 20);
  for (int y = 5; y < 15; ++y) {
    for (int x = 5; x < 15; ++x) block.set(x, y, true);
  }
  CHECK(morphological_open(block, 3, 3) == block);

  // 1-px strokes in every orientation vanish under a 3x3 opening.
  auto strokes = BinaryImage::blank(40, 40);
  for (int i = 0; i < 40; ++i) {
    strokes.set(i, 10, true);
    strokes.set(20, i, true);
    strokes.set(i, i, true);
  }
  CHECK(morphological_open(strokes, 3, 3).count() == 0);

  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto img = random_binary(rng, 32, 24, 0.6);
    auto once = morphological_open(img, 3, 3);
    CHECK(morphological_open(once, 3, 3) == once);
    for (size_t k = 0; k < img.bits.size(); ++k) CHECK((!once.bits[k] || img.bits[k]));
  }
}

TEST_CASE("connected components") {
  CHECK(connected_components(BinaryImage::blank(8, 8), 8).empty());

  auto two = BinaryImage::blank(10, 10);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      two.set(x, y, true);
      two.set(x + 6, y + 6, true);
    }
  }
  auto comps = connected_components(two, 4);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].area == 9);
  CHECK(comps[1].area == 9);
  CHECK(comps[1].bbox == Box{6, 6, 3, 3});

  auto diag = BinaryImage::blank(4, 4);
  diag.set(1, 1, true);
  diag.set(2, 2, true);
  CHECK(connected_components(diag, 4).size() == 2);
  CHECK(connected_components(diag, 8).size() == 1);
  CHECK_THROWS_AS(connected_components(diag, 6), Error);

  std::mt19937 rng(5);
  for (int conn : {4, 8}) {
    for (int i = 0; i < 50; ++i) {
      auto img = random_binary(rng, 1 + static_cast<int>(rng() % 64), 1 + static_cast<int>(rng() % 64), 0.45);
      auto got = label_components(img, conn);
      std::vector<int> lab(img.bits.size(), 0);
      int n = 0;
      long total = 0;
      for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
          long area = 0;
          flood(img, lab, x, y, n + 1, conn, area);
          if (area) ++n, total += area;
        }
      }
      CHECK(static_cast<int>(got.components.size()) == n);
      CHECK(total == img.count());
      // Same partition: labels correspond one-to-one.
      std::map<int, int> fwd, back;
      bool same = true;
      for (size_t k = 0; k < lab.size(); ++k) {
        if ((lab[k] == 0) != (got.labels[k] == 0)) same = false;
        if (!lab[k]) continue;
        auto [f, fi] = fwd.emplace(lab[k], got.labels[k]);
        auto [b, bi] = back.emplace(got.labels[k], lab[k]);
        if (f->second != got.labels[k] || b->second != lab[k]) same = false;
      }
      CHECK(same);
      long sum = 0;
      for (const auto& c : got.components) sum += c.area;
      CHECK(sum == img.count());
      for (size_t k = 1; k < got.components.size(); ++k) {
        const auto& a = got.components[k - 1].bbox;
        const auto& b = got.components[k].bbox;
        CHECK(std::pair(a.y, a.x) <= std::pair(b.y, b.x));
      }
    }
  }
}

TEST_CASE("text region detection") {
  auto blank = RasterPage::filled(300, 200, 255.0f);
  CHECK(detect_text_regions(blank).empty());

  auto page = RasterPage::filled(400, 300, 255.0f);
  const Box truth{150, 140, 100, 20};
  fill_rect(page, truth, 0.0f);
  auto regions = detect_text_regions(page);
  REQUIRE(regions.size() == 1);
  CHECK(iou(regions[0].bbox, truth) >= 0.8);
  CHECK(regions[0].score > 0.5);
  CHECK(regions[0].score <= 1.0);

  // Filter stage: a 1x500 ruling line fails on aspect ratio alone.
  auto opened = BinaryImage::blank(600, 600);
  for (int x = 50; x < 550; ++x) opened.set(x, 300, true);
  CHECK(filter_candidates({Box{50, 300, 500, 1}}, opened, {}).empty());
  DetectParams loose;
  loose.ratio_max = 1000;
  CHECK(filter_candidates({Box{50, 300, 500, 1}}, opened, loose).size() == 1);

  auto ruled = RasterPage::filled(600, 400, 255.0f);
  fill_rect(ruled, {50, 200, 500, 4}, 0.0f);
  CHECK(detect_text_regions(ruled).empty());

  // Page of 1-px diagonal hatching.
  auto hatch = RasterPage::filled(300, 300, 255.0f);
  for (int y = 0; y < 300; ++y) {
    for (int x = 0; x < 300; ++x) {
      if ((x + y) % 12 == 0) hatch.at(x, y) = 0.0f;
    }
  }
  auto trace = detect_text_regions_traced(hatch);
  CHECK(trace.opened.count() == 0);
  CHECK(trace.regions.empty());

  // Three word-like lines: sorted top-to-bottom, then left-to-right.
  auto three = RasterPage::filled(500, 300, 255.0f);
  fill_rect(three, {300, 40, 80, 16}, 0.0f);
  fill_rect(three, {40, 40, 80, 16}, 0.0f);
  fill_rect(three, {60, 200, 120, 16}, 0.0f);
  auto r3 = detect_text_regions(three);
  REQUIRE(r3.size() == 3);
  CHECK(r3[0].bbox.x < 200);
  CHECK(r3[1].bbox.x > 200);
  CHECK(r3[2].bbox.y > 150);
  for (const auto& r : r3) {
    CHECK(r.bbox.x >= 0);
    CHECK(r.bbox.right() <= three.width);
    CHECK(r.bbox.bottom() <= three.height);
  }

  // Glyph-sized blocks on one line merge into a single region.
  auto word = RasterPage::filled(400, 200, 255.0f);
  for (int i = 0; i < 6; ++i) fill_rect(word, {50 + i * 18, 80, 12, 18}, 0.0f);
  auto wr = detect_text_regions(word);
  REQUIRE(wr.size() == 1);
  CHECK(wr[0].component_count >= 6);
}

TEST_CASE("ocr_extract and process_document") {
  auto three = RasterPage::filled(500, 300, 255.0f);
  fill_rect(three, {300, 40, 80, 16}, 0.0f);
  fill_rect(three, {40, 40, 80, 16}, 0.0f);
  fill_rect(three, {60, 200, 120, 16}, 0.0f);
  auto regions = detect_text_regions(three);
  StubOcrAdapter stub({"Recycled content: 25 %", "재활용", "Total: 1,200 m2"});
  auto texts = ocr_extract(three, regions, stub);
  REQUIRE(texts.size() == 3);
  CHECK(texts[0].text == "Recycled content: 25 %");
  CHECK(texts[0].confidence == 1.0);
  CHECK(texts[1].language_hint == LanguageHint::ko);
  for (size_t i = 0; i < 3; ++i) CHECK(texts[i].region.bbox == regions[i].bbox);

  // Crop sizes follow region order.
  std::vector<int> widths;
  StubOcrAdapter probe([&](const RasterPage& crop, size_t) {
    widths.push_back(crop.width);
    return OcrResult{"x", 0.9, LanguageHint::en};
  });
  ocr_extract(three, regions, probe);
  REQUIRE(widths.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(widths[i] == regions[i].bbox.w);

  StubOcrAdapter flaky([](const RasterPage&, size_t call) -> OcrResult {
    if (call == 1) throw std::runtime_error("glyph soup");
    return {"ok", 0.8, LanguageHint::en};
  });
  auto partial = ocr_extract(three, regions, flaky);
  CHECK(partial[1].confidence == 0.0);
  CHECK(partial[1].text.empty());
  CHECK(partial[2].text == "ok");

  SubprocessOcrAdapter missing({"/nonexistent/leedw-ocr-engine"});
  try {
    ocr_extract(three, regions, missing);
    FAIL("expected transient error");
  } catch (const Error& e) {
    CHECK(e.transient());
    CHECK(std::string(e.what()).find("leedw-ocr-engine") != std::string::npos);
  }

  auto page2 = RasterPage::filled(300, 200, 255.0f);
  fill_rect(page2, {50, 90, 100, 20}, 0.0f);
  StubOcrAdapter doc_stub({"a", "b", "c", "d"});
  auto doc = process_document({three, page2}, {}, doc_stub);
  REQUIRE(doc.pages.size() == 2);
  CHECK(doc.pages[0].texts.size() == 3);
  CHECK(doc.pages[1].texts.size() == 1);
  CHECK(doc.pages[1].texts[0].text == "d");
  CHECK(doc.metrics.regions_kept == 4);
  CHECK(doc.metrics.regions_ocrd == 4);
  CHECK(doc.metrics.components_found >= 4);

  auto low = page2;
  low.dpi = 60;
  try {
    process_document({low}, {}, doc_stub);
    FAIL("expected unsupported input");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_input);
  }
}

TEST_CASE("raster codecs round-trip") {
  auto page = RasterPage::filled(7, 5, 200.0f, 300);
  page.at(3, 2) = 10.0f;
  auto pgm = decode_pgm(encode_pgm(page), 300);
  CHECK(pgm.pixels == page.pixels);
  auto png = decode_png(encode_png(page), 300);
  CHECK(png.pixels == page.pixels);
  CHECK(png.width == 7);
  CHECK_THROWS_AS(decode_pgm("P2\n1 1\n255\n0", 300), Error);
  CHECK_THROWS_AS(decode_png("garbage", 300), Error);
}

TEST_CASE("field lines") {
  auto f = parse_field_line("Recycled content: 27.5 %");
  REQUIRE(f);
  CHECK(f->name == "recycled_content");
  CHECK(f->value.value == doctest::Approx(27.5));
  CHECK(f->value.unit == "%");

  f = parse_field_line("Annual water use: 1,250,000 L/yr");
  REQUIRE(f);
  CHECK(f->name == "annual_water_use");
  CHECK(f->value.value == doctest::Approx(1250000));

  f = parse_field_line("Bike racks: 12 ea");
  REQUIRE(f);
  CHECK(f->value.unit == "1");

  CHECK_FALSE(parse_field_line("Material schedule"));
  CHECK_FALSE(parse_field_line("Weight: 12 furlongs"));
  CHECK_FALSE(parse_field_line(": 12 %"));
}

TEST_CASE("docpipe results from the sample project") {
  const std::filesystem::path dir = std::filesystem::path(LEEDW_DATA_DIR) / "projects" / "sample_office";
  store::ProjectRecord p;
  p.id = "sample";
  p.name = "Sample";
  p.floor_area_m2 = 3000;
  p.location = {37.5665, 126.978};
  const Json docs = Json::array({{{"id", "material_schedule"},
                                  {"path", "documents/material_schedule.pgm"},
                                  {"dpi", store::quantity(600, "1")}}});
  const auto s = store::UnifiedStore::create(p, {{"documents", docs}});

  StubOcrAdapter stub({"Material schedule", "Recycled content: 27.5 %", "Regional materials: 18 %"});
  DocpipeOptions opt;
  opt.base_dir = dir;
  opt.adapter = &stub;
  const Json r = docpipe_results(s, opt);

  const auto& regions = r["documents"]["material_schedule"]["regions"];
  REQUIRE(regions.size() == 3);
  CHECK(regions[0]["text"] == "Material schedule");
  CHECK(regions[0]["page"] == store::quantity(1, "1"));
  CHECK(regions[0]["bbox"]["y"]["value"].get<double>() < regions[1]["bbox"]["y"]["value"].get<double>());
  CHECK(r["fields"]["recycled_content"] == store::quantity(27.5, "%"));
  CHECK(r["fields"]["regional_materials"] == store::quantity(18, "%"));
  CHECK(r["field_sources"]["recycled_content"] == "material_schedule#r2");

  SUBCASE("low-confidence text is not reported as a field") {
    StubOcrAdapter weak(StubOcrAdapter::Fn([](const RasterPage&, size_t call) {
      return OcrResult{call == 1 ? "Recycled content: 27.5 %" : "x", 0.2};
    }));
    opt.adapter = &weak;
    CHECK(docpipe_results(s, opt)["fields"].empty());
  }

  SUBCASE("missing document file") {
    const auto bad = store::UnifiedStore::create(p, {{"documents", Json::array({{{"id", "x"}, {"path", "nope.pgm"}}})}});
    CHECK_THROWS_AS(docpipe_results(bad, opt), Error);
  }

  SUBCASE("no adapter") {
    opt.adapter = nullptr;
    CHECK_THROWS_AS(docpipe_results(s, opt), Error);
  }
}
