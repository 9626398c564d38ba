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

#ifndef PRID_CORE_IMAGING_HPP_
#define PRID_CORE_IMAGING_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace prid {

/// Uniform scale + 2D translation: (x, y) -> (scale*x + tx, scale*y + ty).
/// Rotation is deliberately not part of the model; the x and y scales are
/// shared so the aspect ratio of the person is preserved.
struct SimilarityTransform {
  double scale = 1.0;
  double tx = 0.0;
  double ty = 0.0;

  std::pair<double, double> apply(double x, double y) const {
    return {scale * x + tx, scale * y + ty};
  }
  std::pair<double, double> invert(double x, double y) const {
    return {(x - tx) / scale, (y - ty) / scale};
  }
  bool is_identity() const { return scale == 1.0 && tx == 0.0 && ty == 0.0; }
};

/// Axis-aligned rectangle in normalized frame coordinates: x, y, w, h are
/// all fractions of the source width/height, so (0,0,1,1) is the full frame.
struct CropRect {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;

  double area() const { return w * h; }
  /// Throws Error(validation) unless the rect lies within the unit square
  /// with positive extent.
  void validate() const;
};

/// Planar-agnostic image container. Intensities are real numbers in [0,1],
/// stored interleaved row-major: index(x, y, c) = (y*width + x)*channels + c.
/// Pixel centers sit at integer coordinates, origin top-left, x rightward,
/// y downward.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, double fill = 0.0);
  ImageBuffer(int width, int height, int channels, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  double at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool same_shape(const ImageBuffer& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Per-pixel flag distinguishing observed pixels from synthesized ones
/// (zero padding introduced by warping).
struct ValidityMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> valid;  // 1 = observed, 0 = padded

  ValidityMask() = default;
  ValidityMask(int w, int h, bool value)
      : width(w), height(h),
        valid(static_cast<std::size_t>(w) * h, value ? 1 : 0) {}

  bool at(int x, int y) const {
    return valid[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    valid[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  bool all_valid() const;
};

struct WarpResult {
  ImageBuffer image;
  ValidityMask mask;
};

/// Resamples src through the inverse of `t` into an out_width x out_height
/// frame with bilinear interpolation. Output pixels whose preimage falls
/// outside [0, W-1] x [0, H-1] of the source are zero and marked invalid.
WarpResult warp_similarity(const ImageBuffer& src, const SimilarityTransform& t,
                           int out_width, int out_height);

/// Bilinear resampling. Resizing to the source dimensions returns a
/// value-identical image.
ImageBuffer resize(const ImageBuffer& src, int out_width, int out_height);

/// Extracts the pixels of the axis-aligned subwindow. Output dimensions are
/// round-half-up(rect.w * width) x round-half-up(rect.h * height), at least
/// 1x1.
ImageBuffer crop(const ImageBuffer& src, const CropRect& rect);

/// round-half-up for non-negative values.
inline int round_half_up(double v) { return static_cast<int>(v + 0.5); }

}  // namespace prid

#endif  // PRID_CORE_IMAGING_HPP_
