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

#include "leedw/docpipe/detect.hpp"

#include <algorithm>
#include <cmath>

#include "leedw/common/error.hpp"

namespace leedw::docpipe {

void DetectParams::validate() const {
  if (!(sigma > 0)) throw Error(ErrorCode::parameter, "sigma must be > 0");
  if (window != 0 && (window < 3 || window % 2 == 0)) {
    throw Error(ErrorCode::parameter, "threshold window must be odd and >= 3");
  }
  if (open_w < 1 || open_h < 1) throw Error(ErrorCode::parameter, "opening kernel must be at least 1x1");
  if (!(canny_low >= 0) || !(canny_high >= canny_low)) {
    throw Error(ErrorCode::parameter, "canny thresholds need 0 <= low <= high");
  }
  if (!(min_area >= 0) || !(max_area_fraction > 0) || !(max_area_fraction <= 1)) {
    throw Error(ErrorCode::parameter, "area limits out of range");
  }
  if (!(ratio_min > 0) || !(ratio_max >= ratio_min)) throw Error(ErrorCode::parameter, "aspect limits out of range");
  if (!(fill_min >= 0) || !(fill_min <= 1)) throw Error(ErrorCode::parameter, "fill_min must be in [0, 1]");
  if (!(merge_gap_factor >= 0)) throw Error(ErrorCode::parameter, "merge_gap_factor must be >= 0");
}

namespace {

double fill_ratio(const Box& b, const BinaryImage& opened) {
  return b.area() > 0 ? std::min(1.0, static_cast<double>(opened.count_in(b)) / static_cast<double>(b.area())) : 0.0;
}

}  // namespace

std::vector<TextRegion> filter_candidates(const std::vector<Box>& boxes, const BinaryImage& opened,
                                          const DetectParams& params) {
  const double max_area = params.max_area_fraction * static_cast<double>(opened.width) * opened.height;
  std::vector<TextRegion> out;
  for (const Box& b : boxes) {
    if (b.w < 1 || b.h < 1) continue;
    const double area = static_cast<double>(b.area());
    if (area < params.min_area || area > max_area) continue;
    const double ratio = static_cast<double>(b.w) / b.h;
    if (ratio < params.ratio_min || ratio > params.ratio_max) continue;
    const double fill = fill_ratio(b, opened);
    if (fill < params.fill_min) continue;
    out.push_back({b, 1, fill});
  }
  return out;
}

std::vector<TextRegion> merge_line_regions(std::vector<TextRegion> regions, const BinaryImage& opened,
                                           const DetectParams& params) {
  if (regions.size() < 2) return regions;
  std::vector<int> heights;
  for (const auto& r : regions) heights.push_back(r.bbox.h);
  std::sort(heights.begin(), heights.end());
  const size_t n = heights.size();
  const double median = n % 2 ? heights[n / 2] : 0.5 * (heights[n / 2 - 1] + heights[n / 2]);
  const double gap = params.merge_gap_factor * median;

  auto joinable = [&](const Box& a, const Box& b) {
    const int overlap = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    if (overlap < 0.5 * std::min(a.h, b.h)) return false;
    const int hgap = std::max(a.x, b.x) - std::min(a.right(), b.right());
    return hgap <= gap;
  };
  for (bool changed = true; changed;) {
    changed = false;
    sort_regions(regions);
    for (size_t i = 0; i < regions.size() && !changed; ++i) {
      for (size_t j = i + 1; j < regions.size(); ++j) {
        if (!joinable(regions[i].bbox, regions[j].bbox)) continue;
        regions[i].bbox = regions[i].bbox.united(regions[j].bbox);
        regions[i].component_count += regions[j].component_count;
        regions.erase(regions.begin() + static_cast<long>(j));
        changed = true;
        break;
      }
    }
  }
  for (auto& r : regions) r.score = fill_ratio(r.bbox, opened);
  sort_regions(regions);
  return regions;
}

void sort_regions(std::vector<TextRegion>& regions) {
  std::stable_sort(regions.begin(), regions.end(), [](const TextRegion& a, const TextRegion& b) {
    return std::tie(a.bbox.y, a.bbox.x, a.bbox.w, a.bbox.h) < std::tie(b.bbox.y, b.bbox.x, b.bbox.w, b.bbox.h);
  });
}

DetectionTrace detect_text_regions_traced(const RasterPage& page, const DetectParams& params) {
  page.validate();
  params.validate();
  DetectionTrace t;
  const RasterPage blurred = gaussian_blur(page, params.sigma);
  t.binary = adaptive_threshold(blurred, params.window ? params.window : default_window(page.dpi), params.c);
  t.opened = morphological_open(t.binary, params.open_w, params.open_h);
  t.edges = canny(t.opened, params.canny_low, params.canny_high);
  const auto comps = connected_components(t.edges, 8);
  t.components_found = static_cast<long>(comps.size());
  std::vector<Box> boxes;
  for (const auto& c : comps) boxes.push_back(c.bbox);
  auto kept = filter_candidates(boxes, t.opened, params);
  t.candidates_kept = static_cast<long>(kept.size());
  t.regions = merge_line_regions(std::move(kept), t.opened, params);
  return t;
}

std::vector<TextRegion> detect_text_regions(const RasterPage& page, const DetectParams& params) {
  return detect_text_regions_traced(page, params).regions;
}

}  // namespace leedw::docpipe
