/*
 * Copyright 2026 The prid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "core/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace prid {

namespace {

void check_dims(int width, int height, int channels) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::validation, "image dimensions must be positive");
  if (channels != 1 && channels != 3)
    throw Error(ErrorCode::validation, "channel count must be 1 or 3");
}

// Bilinear sample at (fx, fy), which must already lie in
// [0, W-1] x [0, H-1].
double sample_bilinear(const ImageBuffer& img, double fx, double fy, int c) {
  int x0 = static_cast<int>(std::floor(fx));
  int y0 = static_cast<int>(std::floor(fy));
  x0 = std::min(x0, img.width() - 1);
  y0 = std::min(y0, img.height() - 1);
  int x1 = std::min(x0 + 1, img.width() - 1);
  int y1 = std::min(y0 + 1, img.height() - 1);
  double dx = fx - x0;
  double dy = fy - y0;
  double top = (1.0 - dx) * img.at(x0, y0, c) + dx * img.at(x1, y0, c);
  double bottom = (1.0 - dx) * img.at(x0, y1, c) + dx * img.at(x1, y1, c);
  return (1.0 - dy) * top + dy * bottom;
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels),
      data_(static_cast<std::size_t>(width) * height * channels, fill) {
  check_dims(width, height, channels);
}

ImageBuffer::ImageBuffer(int width, int height, int channels,
                         std::vector<double> data)
    : width_(width), height_(height), channels_(channels),
      data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels)
    throw Error(ErrorCode::validation, "data length does not match dimensions");
}

bool ValidityMask::all_valid() const {
  return std::all_of(valid.begin(), valid.end(),
                     [](std::uint8_t v) { return v != 0; });
}

void CropRect::validate() const {
  if (!(w > 0.0) || !(h > 0.0))
    throw Error(ErrorCode::validation, "crop rect must have positive extent");
  if (x < 0.0 || y < 0.0 || x + w > 1.0 || y + h > 1.0)
    throw Error(ErrorCode::validation,
                "crop rect falls outside the unit square");
}

WarpResult warp_similarity(const ImageBuffer& src, const SimilarityTransform& t,
                           int out_width, int out_height) {
  if (!(t.scale > 0.0))
    throw Error(ErrorCode::validation, "transform scale must be positive");
  if (out_width <= 0 || out_height <= 0)
    throw Error(ErrorCode::validation, "output dimensions must be positive");

  WarpResult out{ImageBuffer(out_width, out_height, src.channels()),
                 ValidityMask(out_width, out_height, false)};
  const double max_x = src.width() - 1;
  const double max_y = src.height() - 1;
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      auto [sx, sy] = t.invert(x, y);
      if (sx < 0.0 || sx > max_x || sy < 0.0 || sy > max_y) continue;
      out.mask.set(x, y, true);
      for (int c = 0; c < src.channels(); ++c)
        out.image.at(x, y, c) = sample_bilinear(src, sx, sy, c);
    }
  }
  return out;
}

ImageBuffer resize(const ImageBuffer& src, int out_width, int out_height) {
  if (out_width <= 0 || out_height <= 0)
    throw Error(ErrorCode::validation, "output dimensions must be positive");

  // Corner-anchored sampling keeps same-size resizing value-identical.
  const double x_step =
      out_width > 1 ? static_cast<double>(src.width() - 1) / (out_width - 1) : 0.0;
  const double y_step =
      out_height > 1 ? static_cast<double>(src.height() - 1) / (out_height - 1)
                     : 0.0;
  const double x_base = out_width > 1 ? 0.0 : (src.width() - 1) / 2.0;
  const double y_base = out_height > 1 ? 0.0 : (src.height() - 1) / 2.0;

  ImageBuffer out(out_width, out_height, src.channels());
  for (int y = 0; y < out_height; ++y) {
    double sy = y_base + y_step * y;
    for (int x = 0; x < out_width; ++x) {
      double sx = x_base + x_step * x;
      for (int c = 0; c < src.channels(); ++c)
        out.at(x, y, c) = sample_bilinear(src, sx, sy, c);
    }
  }
  return out;
}

ImageBuffer crop(const ImageBuffer& src, const CropRect& rect) {
  rect.validate();
  int w_px = std::max(1, round_half_up(rect.w * src.width()));
  int h_px = std::max(1, round_half_up(rect.h * src.height()));
  w_px = std::min(w_px, src.width());
  h_px = std::min(h_px, src.height());
  int x0 = std::clamp(round_half_up(rect.x * src.width()), 0, src.width() - w_px);
  int y0 =
      std::clamp(round_half_up(rect.y * src.height()), 0, src.height() - h_px);

  ImageBuffer out(w_px, h_px, src.channels());
  for (int y = 0; y < h_px; ++y)
    for (int x = 0; x < w_px; ++x)
      for (int c = 0; c < src.channels(); ++c)
        out.at(x, y, c) = src.at(x0 + x, y0 + y, c);
  return out;
}

}  // namespace prid
