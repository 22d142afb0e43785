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

#include "leedw/docpipe/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"

namespace leedw::docpipe {

Box Box::united(const Box& o) const {
  const int x0 = std::min(x, o.x), y0 = std::min(y, o.y);
  const int x1 = std::max(right(), o.right()), y1 = std::max(bottom(), o.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

double iou(const Box& a, const Box& b) {
  const int ix = std::max(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const int iy = std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const double inter = static_cast<double>(ix) * iy;
  const double uni = static_cast<double>(a.area() + b.area()) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

RasterPage RasterPage::filled(int width, int height, float value, double dpi) {
  RasterPage p;
  p.width = width;
  p.height = height;
  p.dpi = dpi;
  p.pixels.assign(static_cast<size_t>(width) * height, value);
  return p;
}

float RasterPage::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
}

void RasterPage::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorCode::validation, "page dimensions must be >= 1");
  if (pixels.size() != static_cast<size_t>(width) * height) {
    throw Error(ErrorCode::validation, "pixel count does not match width x height");
  }
  if (!(dpi >= 72.0)) {
    throw Error(ErrorCode::unsupported_input,
                "page resolution " + format_number(dpi) + " dpi is below the 72 dpi minimum");
  }
}

RasterPage RasterPage::crop(const Box& box) const {
  const int x0 = std::clamp(box.x, 0, width), y0 = std::clamp(box.y, 0, height);
  const int x1 = std::clamp(box.right(), x0, width), y1 = std::clamp(box.bottom(), y0, height);
  RasterPage out = filled(std::max(1, x1 - x0), std::max(1, y1 - y0), 255.0f, dpi);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) out.at(x - x0, y - y0) = at(x, y);
  }
  return out;
}

BinaryImage BinaryImage::blank(int width, int height) {
  return BinaryImage{width, height, std::vector<std::uint8_t>(static_cast<size_t>(width) * height, 0)};
}

long BinaryImage::count() const { return static_cast<long>(std::count(bits.begin(), bits.end(), 1)); }

long BinaryImage::count_in(const Box& box) const {
  long n = 0;
  for (int y = std::max(0, box.y); y < std::min(height, box.bottom()); ++y) {
    for (int x = std::max(0, box.x); x < std::min(width, box.right()); ++x) n += at(x, y);
  }
  return n;
}

namespace {

// Reads one whitespace-delimited PGM header token, skipping comments.
std::string pgm_token(std::string_view bytes, size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  return std::string(bytes.substr(start, pos - start));
}

uint8_t to_byte(float v) { return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

RasterPage decode_pgm(std::string_view bytes, double dpi) {
  size_t pos = 0;
  if (pgm_token(bytes, pos) != "P5") throw Error(ErrorCode::unsupported_input, "not a binary PGM (P5)");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pgm_token(bytes, pos));
    h = std::stoi(pgm_token(bytes, pos));
    maxval = std::stoi(pgm_token(bytes, pos));
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse, "malformed PGM header");
  }
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) {
    throw Error(ErrorCode::unsupported_input, "unsupported PGM geometry or maxval");
  }
  ++pos;  // single whitespace after maxval
  const size_t n = static_cast<size_t>(w) * h;
  if (bytes.size() < pos + n) throw Error(ErrorCode::parse, "truncated PGM data");
  RasterPage page = RasterPage::filled(w, h, 0.0f, dpi);
  for (size_t i = 0; i < n; ++i) {
    page.pixels[i] = static_cast<float>(static_cast<unsigned char>(bytes[pos + i])) * 255.0f / maxval;
  }
  return page;
}

std::string encode_pgm(const RasterPage& page) {
  std::string out = "P5\n" + std::to_string(page.width) + " " + std::to_string(page.height) + "\n255\n";
  out.reserve(out.size() + page.pixels.size());
  for (float v : page.pixels) out.push_back(static_cast<char>(to_byte(v)));
  return out;
}

RasterPage decode_png(std::string_view bytes, double dpi) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::parse, std::string("cannot read PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<uint8_t> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::parse, std::string("cannot decode PNG: ") + image.message);
  }
  RasterPage page = RasterPage::filled(static_cast<int>(image.width), static_cast<int>(image.height), 0.0f, dpi);
  for (size_t i = 0; i < buf.size(); ++i) page.pixels[i] = buf[i];
  return page;
}

std::string encode_png(const RasterPage& page) {
  std::vector<uint8_t> gray(page.pixels.size());
  std::transform(page.pixels.begin(), page.pixels.end(), gray.begin(), to_byte);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(page.width);
  image.height = static_cast<png_uint_32>(page.height);
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, gray.data(), 0, nullptr)) {
    throw Error(ErrorCode::io, std::string("cannot size PNG: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, gray.data(), 0, nullptr)) {
    throw Error(ErrorCode::io, std::string("cannot encode PNG: ") + image.message);
  }
  out.resize(size);
  return out;
}

RasterPage load_raster(const std::filesystem::path& path, double dpi) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 8 && static_cast<unsigned char>(bytes[0]) == 0x89 && bytes.compare(1, 3, "PNG") == 0) {
    return decode_png(bytes, dpi);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes, dpi);
  throw Error(ErrorCode::unsupported_input, "unsupported raster format: " + path.string());
}

}  // namespace leedw::docpipe
