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

#include "leedw/docpipe/image.hpp"

namespace leedw::docpipe {

/// Normalized 1-D kernel of radius ceil(3 sigma). Throws Error(parameter)
/// unless sigma > 0.
std::vector<double> gaussian_kernel(double sigma);

RasterPage gaussian_blur(const RasterPage& page, double sigma);

/// Foreground iff intensity < local window mean - c (edge-replicated).
BinaryImage adaptive_threshold(const RasterPage& page, int window, double c);

/// Default threshold window for a resolution: 31 px at 600 dpi, kept odd.
int default_window(double dpi);

// Rectangular structuring element anchored at (kw/2, kh/2). Pixels outside
// the image count as background, so opening is a union of fitted rectangles.
BinaryImage erode(const BinaryImage& img, int kw, int kh);
BinaryImage dilate(const BinaryImage& img, int kw, int kh);
BinaryImage morphological_open(const BinaryImage& img, int kw, int kh);

struct Component {
  int label = 0;  // 1-based, in output order
  long area = 0;
  Box bbox;
};

struct Labeling {
  std::vector<int> labels;  // 0 = background
  std::vector<Component> components;
};

/// Components sorted by (bbox.y, bbox.x); labels renumbered to match.
Labeling label_components(const BinaryImage& img, int connectivity);
std::vector<Component> connected_components(const BinaryImage& img, int connectivity);

/// Sobel + non-maximum suppression + hysteresis on the 0/255 rendering of a
/// binary image.
BinaryImage canny(const BinaryImage& img, double low, double high);

}  // namespace leedw::docpipe
