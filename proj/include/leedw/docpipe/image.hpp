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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace leedw::docpipe {

struct Box {
  int x = 0, y = 0, w = 0, h = 0;

  long area() const { return static_cast<long>(w) * h; }
  int right() const { return x + w; }   // exclusive
  int bottom() const { return y + h; }  // exclusive
  Box united(const Box& o) const;
  bool operator==(const Box&) const = default;
};

double iou(const Box& a, const Box& b);

/// Grayscale page, row-major, intensities in [0, 255]. Stored as float so
/// that filtering stages keep sub-integer precision.
struct RasterPage {
  int width = 0;
  int height = 0;
  double dpi = 600.0;
  std::vector<float> pixels;

  static RasterPage filled(int width, int height, float value, double dpi = 600.0);

  float at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
  float& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  /// Edge-replicated access.
  float clamped(int x, int y) const;

  /// Throws Error(validation) on size mismatch or bad dimensions, and
  /// Error(unsupported_input) when dpi < 72.
  void validate() const;
  RasterPage crop(const Box& box) const;
};

/// Foreground (ink) pixels are 1.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  static BinaryImage blank(int width, int height);

  bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
  long count() const;
  long count_in(const Box& box) const;
  bool operator==(const BinaryImage&) const = default;
};

/// Binary PGM (P5, maxval <= 255).
RasterPage decode_pgm(std::string_view bytes, double dpi);
std::string encode_pgm(const RasterPage& page);
/// Any PNG, converted to 8-bit gray.
RasterPage decode_png(std::string_view bytes, double dpi);
std::string encode_png(const RasterPage& page);

/// Picks the decoder from the file's magic bytes.
RasterPage load_raster(const std::filesystem::path& path, double dpi);

}  // namespace leedw::docpipe
