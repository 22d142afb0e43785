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

#include <vector>

#include "leedw/docpipe/preprocess.hpp"

namespace leedw::docpipe {

struct DetectParams {
  double sigma = 1.0;
  int window = 0;  // 0 = default_window(page.dpi)
  double c = 10.0;
  int open_w = 3;
  int open_h = 3;
  double canny_low = 50.0;
  double canny_high = 150.0;
  double min_area = 40.0;
  double max_area_fraction = 0.05;
  double ratio_min = 0.04;
  double ratio_max = 25.0;
  double fill_min = 0.15;
  double merge_gap_factor = 0.5;

  void validate() const;
};

struct TextRegion {
  Box bbox;
  int component_count = 0;
  double score = 0.0;  // ink fill ratio of the box, in [0, 1]
};

/// Candidates that pass the area, aspect-ratio and fill filters. `opened` is
/// the cleaned binary the fill ratio is measured on.
std::vector<TextRegion> filter_candidates(const std::vector<Box>& boxes, const BinaryImage& opened,
                                          const DetectParams& params);

/// Joins boxes on the same text line whose horizontal gap is within
/// merge_gap_factor x the median candidate height.
std::vector<TextRegion> merge_line_regions(std::vector<TextRegion> regions, const BinaryImage& opened,
                                           const DetectParams& params);

/// Top-to-bottom, then left-to-right.
void sort_regions(std::vector<TextRegion>& regions);

struct DetectionTrace {
  BinaryImage binary;
  BinaryImage opened;
  BinaryImage edges;
  long components_found = 0;
  long candidates_kept = 0;
  std::vector<TextRegion> regions;
};

DetectionTrace detect_text_regions_traced(const RasterPage& page, const DetectParams& params = {});
std::vector<TextRegion> detect_text_regions(const RasterPage& page, const DetectParams& params = {});

}  // namespace leedw::docpipe
