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

#include "leedw/docpipe/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "leedw/common/error.hpp"

namespace leedw::docpipe {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw Error(ErrorCode::parameter, "sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0;
  for (int d = -radius; d <= radius; ++d) {
    k[d + radius] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += k[d + radius];
  }
  for (double& w : k) w /= sum;
  return k;
}

RasterPage gaussian_blur(const RasterPage& page, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  const int w = page.width, h = page.height;
  std::vector<double> tmp(page.pixels.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int d = -r; d <= r; ++d) acc += k[d + r] * page.at(std::clamp(x + d, 0, w - 1), y);
      tmp[static_cast<size_t>(y) * w + x] = acc;
    }
  }
  RasterPage out = page;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int d = -r; d <= r; ++d) acc += k[d + r] * tmp[static_cast<size_t>(std::clamp(y + d, 0, h - 1)) * w + x];
      out.at(x, y) = static_cast<float>(acc);
    }
  }
  return out;
}

int default_window(double dpi) {
  int w = static_cast<int>(std::lround(31.0 * dpi / 600.0));
  if (w % 2 == 0) ++w;
  return std::max(3, w);
}

BinaryImage adaptive_threshold(const RasterPage& page, int window, double c) {
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorCode::parameter, "threshold window must be odd and >= 3, got " + std::to_string(window));
  }
  const int r = window / 2, w = page.width, h = page.height;
  // Row sums over the horizontal window, then column sums of those.
  std::vector<double> rows(page.pixels.size());
  for (int y = 0; y < h; ++y) {
    double acc = 0;
    for (int d = -r; d <= r; ++d) acc += page.clamped(d, y);
    for (int x = 0; x < w; ++x) {
      rows[static_cast<size_t>(y) * w + x] = acc;
      acc += page.clamped(x + r + 1, y) - page.clamped(x - r, y);
    }
  }
  const double n = static_cast<double>(window) * window;
  BinaryImage out = BinaryImage::blank(w, h);
  for (int x = 0; x < w; ++x) {
    auto row = [&](int y) { return rows[static_cast<size_t>(std::clamp(y, 0, h - 1)) * w + x]; };
    double acc = 0;
    for (int d = -r; d <= r; ++d) acc += row(d);
    for (int y = 0; y < h; ++y) {
      out.set(x, y, page.at(x, y) < acc / n - c);
      acc += row(y + r + 1) - row(y - r);
    }
  }
  return out;
}

namespace {

void check_kernel(int kw, int kh) {
  if (kw < 1 || kh < 1) throw Error(ErrorCode::parameter, "structuring element must be at least 1x1");
}

// One-dimensional pass. For erosion a pixel survives iff every offset in
// [lo, hi] lands on foreground inside the image; dilation is the dual with
// the reflected offsets.
BinaryImage pass(const BinaryImage& img, int lo, int hi, bool horizontal, bool erosion) {
  BinaryImage out = BinaryImage::blank(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      bool v = erosion;
      for (int d = lo; d <= hi; ++d) {
        const int sx = horizontal ? x + d : x, sy = horizontal ? y : y + d;
        const bool inside = sx >= 0 && sy >= 0 && sx < img.width && sy < img.height;
        const bool fg = inside && img.at(sx, sy);
        if (erosion && !fg) { v = false; break; }
        if (!erosion && fg) { v = true; break; }
      }
      out.set(x, y, v);
    }
  }
  return out;
}

}  // namespace

BinaryImage erode(const BinaryImage& img, int kw, int kh) {
  check_kernel(kw, kh);
  const int ax = kw / 2, ay = kh / 2;
  return pass(pass(img, -ax, kw - 1 - ax, true, true), -ay, kh - 1 - ay, false, true);
}

BinaryImage dilate(const BinaryImage& img, int kw, int kh) {
  check_kernel(kw, kh);
  const int ax = kw / 2, ay = kh / 2;
  return pass(pass(img, -(kw - 1 - ax), ax, true, false), -(kh - 1 - ay), ay, false, false);
}

BinaryImage morphological_open(const BinaryImage& img, int kw, int kh) {
  return dilate(erode(img, kw, kh), kw, kh);
}

Labeling label_components(const BinaryImage& img, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    throw Error(ErrorCode::parameter, "connectivity must be 4 or 8");
  }
  const int w = img.width, h = img.height;
  Labeling out;
  out.labels.assign(static_cast<size_t>(w) * h, 0);
  std::vector<Component> found;
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!img.at(x, y) || out.labels[static_cast<size_t>(y) * w + x]) continue;
      const int label = static_cast<int>(found.size()) + 1;
      Component comp{label, 0, {x, y, 1, 1}};
      int x0 = x, y0 = y, x1 = x, y1 = y;
      out.labels[static_cast<size_t>(y) * w + x] = label;
      queue.emplace_back(x, y);
      while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop_front();
        ++comp.area;
        x0 = std::min(x0, cx), x1 = std::max(x1, cx), y0 = std::min(y0, cy), y1 = std::max(y1, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || (connectivity == 4 && dx != 0 && dy != 0)) continue;
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h || !img.at(nx, ny)) continue;
            int& l = out.labels[static_cast<size_t>(ny) * w + nx];
            if (l) continue;
            l = label;
            queue.emplace_back(nx, ny);
          }
        }
      }
      comp.bbox = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
      found.push_back(comp);
    }
  }
  std::vector<Component> sorted = found;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Component& a, const Component& b) {
    return std::pair(a.bbox.y, a.bbox.x) < std::pair(b.bbox.y, b.bbox.x);
  });
  std::vector<int> remap(found.size() + 1, 0);
  for (size_t i = 0; i < sorted.size(); ++i) {
    remap[sorted[i].label] = static_cast<int>(i) + 1;
    sorted[i].label = static_cast<int>(i) + 1;
  }
  for (int& l : out.labels) l = remap[l];
  out.components = std::move(sorted);
  return out;
}

std::vector<Component> connected_components(const BinaryImage& img, int connectivity) {
  return label_components(img, connectivity).components;
}

BinaryImage canny(const BinaryImage& img, double low, double high) {
  if (!(low >= 0) || !(high >= low)) throw Error(ErrorCode::parameter, "canny thresholds need 0 <= low <= high");
  const int w = img.width, h = img.height;
  auto v = [&](int x, int y) { return img.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)) ? 255.0 : 0.0; };
  std::vector<double> mag(static_cast<size_t>(w) * h);
  std::vector<uint8_t> dir(mag.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (v(x + 1, y - 1) + 2 * v(x + 1, y) + v(x + 1, y + 1)) -
                        (v(x - 1, y - 1) + 2 * v(x - 1, y) + v(x - 1, y + 1));
      const double gy = (v(x - 1, y + 1) + 2 * v(x, y + 1) + v(x + 1, y + 1)) -
                        (v(x - 1, y - 1) + 2 * v(x, y - 1) + v(x + 1, y - 1));
      const size_t i = static_cast<size_t>(y) * w + x;
      mag[i] = std::hypot(gx, gy);
      double angle = std::atan2(gy, gx) * 180.0 / M_PI;
      if (angle < 0) angle += 180.0;
      dir[i] = angle < 22.5 || angle >= 157.5 ? 0 : angle < 67.5 ? 1 : angle < 112.5 ? 2 : 3;
    }
  }
  static constexpr int kStep[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  auto m = [&](int x, int y) {
    return x < 0 || y < 0 || x >= w || y >= h ? 0.0 : mag[static_cast<size_t>(y) * w + x];
  };
  // 0 = none, 1 = weak, 2 = strong
  std::vector<uint8_t> cls(mag.size(), 0);
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      const double g = mag[i];
      if (g < low || g == 0) continue;
      const auto [sx, sy] = kStep[dir[i]];
      // Plateaus keep exactly one side.
      if (!(g > m(x - sx, y - sy) && g >= m(x + sx, y + sy))) continue;
      cls[i] = g >= high ? 2 : 1;
      if (cls[i] == 2) queue.emplace_back(x, y);
    }
  }
  BinaryImage out = BinaryImage::blank(w, h);
  for (const auto& [x, y] : queue) out.set(x, y, true);
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const size_t j = static_cast<size_t>(ny) * w + nx;
        if (cls[j] == 1 && !out.at(nx, ny)) {
          out.set(nx, ny, true);
          queue.emplace_back(nx, ny);
        }
      }
    }
  }
  return out;
}

}  // namespace leedw::docpipe
