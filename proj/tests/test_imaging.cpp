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

#include <cmath>
#include <filesystem>

#include <doctest.h>

#include "core/error.hpp"
#include "core/image_io.hpp"
#include "core/imaging.hpp"
#include "core/rng.hpp"

using namespace prid;

namespace {

ImageBuffer random_image(int w, int h, int ch, SplitMix64& rng) {
  ImageBuffer img(w, h, ch);
  for (double& v : img.data()) v = rng.next_double();
  return img;
}

// Smooth enough that bilinear resampling stays within tolerance.
ImageBuffer smooth_image(int w, int h) {
  ImageBuffer img(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.at(x, y, 0) = 0.5 + 0.2 * (static_cast<double>(x) / w) +
                        0.1 * std::sin(2.0 * 3.14159265358979 * y / 16.0);
  return img;
}

}  // namespace

TEST_CASE("warp with identity transform is the identity") {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    int w = 1 + static_cast<int>(rng.next_below(12));
    int h = 1 + static_cast<int>(rng.next_below(12));
    int ch = rng.next_below(2) == 0 ? 1 : 3;
    ImageBuffer img = random_image(w, h, ch, rng);
    WarpResult out = warp_similarity(img, SimilarityTransform{}, w, h);
    CHECK(out.mask.all_valid());
    for (std::size_t i = 0; i < img.data().size(); ++i)
      CHECK(out.image.data()[i] == img.data()[i]);
  }
}

TEST_CASE("warp by a one pixel translation shifts columns") {
  // transform (x,y) -> (x+1, y): column 0 has no preimage
  ImageBuffer img(2, 2, 1);
  img.at(0, 0, 0) = 0.25;
  img.at(1, 0, 0) = 0.5;
  img.at(0, 1, 0) = 0.75;
  img.at(1, 1, 0) = 1.0;
  WarpResult out = warp_similarity(img, {1.0, 1.0, 0.0}, 2, 2);
  CHECK(out.image.at(0, 0, 0) == 0.0);
  CHECK(out.image.at(0, 1, 0) == 0.0);
  CHECK_FALSE(out.mask.at(0, 0));
  CHECK_FALSE(out.mask.at(0, 1));
  CHECK(out.image.at(1, 0, 0) == 0.25);
  CHECK(out.image.at(1, 1, 0) == 0.75);
  CHECK(out.mask.at(1, 0));
  CHECK(out.mask.at(1, 1));
}

TEST_CASE("warp of a single pixel at scale two") {
  ImageBuffer img(1, 1, 1);
  img.at(0, 0, 0) = 0.7;
  WarpResult out = warp_similarity(img, {2.0, 0.0, 0.0}, 2, 2);
  // only (0,0) maps back into the degenerate [0,0]x[0,0] footprint
  CHECK(out.image.at(0, 0, 0) == 0.7);
  CHECK(out.mask.at(0, 0));
  CHECK(out.image.at(1, 0, 0) == 0.0);
  CHECK(out.image.at(0, 1, 0) == 0.0);
  CHECK(out.image.at(1, 1, 0) == 0.0);
  CHECK_FALSE(out.mask.at(1, 1));
}

TEST_CASE("warp rejects non-positive scale") {
  ImageBuffer img(2, 2, 1);
  CHECK_THROWS_AS(warp_similarity(img, {0.0, 0.0, 0.0}, 2, 2), Error);
  CHECK_THROWS_AS(warp_similarity(img, {-1.0, 0.0, 0.0}, 2, 2), Error);
}

TEST_CASE("validity mask equals preimage containment") {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    int w = 2 + static_cast<int>(rng.next_below(10));
    int h = 2 + static_cast<int>(rng.next_below(10));
    ImageBuffer img = random_image(w, h, 1, rng);
    SimilarityTransform t{rng.uniform(0.5, 2.0), rng.uniform(-5.0, 5.0),
                          rng.uniform(-5.0, 5.0)};
    WarpResult out = warp_similarity(img, t, w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        auto [sx, sy] = t.invert(x, y);
        bool inside = sx >= 0.0 && sx <= w - 1 && sy >= 0.0 && sy <= h - 1;
        CHECK(out.mask.at(x, y) == inside);
      }
  }
}

TEST_CASE("warp round trip reproduces interior pixels") {
  const int n = 32;
  ImageBuffer img = smooth_image(n, n);
  const double scale = 1.3;
  WarpResult fwd = warp_similarity(img, {scale, 0.0, 0.0}, n, n);
  WarpResult back = warp_similarity(fwd.image, {1.0 / scale, 0.0, 0.0}, n, n);
  int interior = static_cast<int>((n - 1) / scale) - 1;
  REQUIRE(interior > 8);
  for (int y = 2; y < interior; ++y)
    for (int x = 2; x < interior; ++x)
      CHECK(std::abs(back.image.at(x, y, 0) - img.at(x, y, 0)) <= 2.0 / 255.0);
}

TEST_CASE("resize to the same size is value-identical") {
  SplitMix64 rng(3);
  ImageBuffer img = random_image(7, 5, 3, rng);
  ImageBuffer out = resize(img, 7, 5);
  for (std::size_t i = 0; i < img.data().size(); ++i)
    CHECK(out.data()[i] == img.data()[i]);
}

TEST_CASE("resize interpolates a two pixel ramp") {
  ImageBuffer img(2, 1, 1);
  img.at(0, 0, 0) = 0.0;
  img.at(1, 0, 0) = 1.0;
  ImageBuffer out = resize(img, 4, 1);
  CHECK(out.at(0, 0, 0) == doctest::Approx(0.0));
  CHECK(out.at(1, 0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(out.at(2, 0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(out.at(3, 0, 0) == doctest::Approx(1.0));
  for (int x = 1; x < 4; ++x)
    CHECK(out.at(x, 0, 0) >= out.at(x - 1, 0, 0));
}

TEST_CASE("resize to a single pixel samples the center") {
  ImageBuffer img(3, 3, 1);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) img.at(x, y, 0) = (y * 3 + x) / 9.0;
  ImageBuffer out = resize(img, 1, 1);
  REQUIRE(out.width() == 1);
  REQUIRE(out.height() == 1);
  CHECK(out.at(0, 0, 0) == doctest::Approx(img.at(1, 1, 0)));
}

TEST_CASE("resize keeps constant images constant") {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    double value = rng.next_double();
    ImageBuffer img(3, 4, 1, value);
    int w = 1 + static_cast<int>(rng.next_below(9));
    int h = 1 + static_cast<int>(rng.next_below(9));
    ImageBuffer out = resize(img, w, h);
    for (double v : out.data())
      CHECK(v == doctest::Approx(value).epsilon(1e-12));
  }
}

TEST_CASE("crop of the full frame is the identity") {
  SplitMix64 rng(5);
  ImageBuffer img = random_image(6, 9, 3, rng);
  ImageBuffer out = crop(img, {0.0, 0.0, 1.0, 1.0});
  REQUIRE(out.width() == 6);
  REQUIRE(out.height() == 9);
  for (std::size_t i = 0; i < img.data().size(); ++i)
    CHECK(out.data()[i] == img.data()[i]);
}

TEST_CASE("crop picks the bottom right block") {
  ImageBuffer img(4, 4, 1);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) img.at(x, y, 0) = (y * 4 + x) / 16.0;
  ImageBuffer out = crop(img, {0.5, 0.5, 0.5, 0.5});
  REQUIRE(out.width() == 2);
  REQUIRE(out.height() == 2);
  CHECK(out.at(0, 0, 0) == img.at(2, 2, 0));
  CHECK(out.at(1, 0, 0) == img.at(3, 2, 0));
  CHECK(out.at(0, 1, 0) == img.at(2, 3, 0));
  CHECK(out.at(1, 1, 0) == img.at(3, 3, 0));
}

TEST_CASE("crop outside the unit square fails") {
  ImageBuffer img(4, 4, 1);
  CHECK_THROWS_AS(crop(img, {0.6, 0.0, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(crop(img, {-0.1, 0.0, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(crop(img, {0.0, 0.0, 0.0, 0.5}), Error);
}

TEST_CASE("crop composes up to one pixel of boundary rounding") {
  SplitMix64 rng(6);
  ImageBuffer img = random_image(24, 24, 1, rng);
  for (int trial = 0; trial < 30; ++trial) {
    CropRect a{rng.uniform(0.0, 0.4), rng.uniform(0.0, 0.4),
               rng.uniform(0.3, 0.6), rng.uniform(0.3, 0.6)};
    CropRect b{rng.uniform(0.0, 0.4), rng.uniform(0.0, 0.4),
               rng.uniform(0.3, 0.6), rng.uniform(0.3, 0.6)};
    CropRect composed{a.x + b.x * a.w, a.y + b.y * a.h, a.w * b.w, a.h * b.h};
    ImageBuffer two_step = crop(crop(img, a), b);
    ImageBuffer one_step = crop(img, composed);
    CHECK(std::abs(two_step.width() - one_step.width()) <= 1);
    CHECK(std::abs(two_step.height() - one_step.height()) <= 1);
  }
}

TEST_CASE("png and pnm files round trip through the 255 grid") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "prid_imaging_io";
  fs::create_directories(dir);

  SplitMix64 rng(7);
  ImageBuffer img(5, 4, 3);
  for (double& v : img.data())
    v = static_cast<double>(rng.next_below(256)) / 255.0;

  for (const char* name : {"roundtrip.png", "roundtrip.ppm"}) {
    std::string path = (dir / name).string();
    save_image(img, path);
    ImageBuffer loaded = load_image(path);
    REQUIRE(loaded.width() == img.width());
    REQUIRE(loaded.height() == img.height());
    REQUIRE(loaded.channels() == img.channels());
    for (std::size_t i = 0; i < img.data().size(); ++i)
      CHECK(loaded.data()[i] == img.data()[i]);
  }

  ImageBuffer gray(3, 3, 1, 0.5);
  save_image(gray, (dir / "gray.png").string());
  ImageBuffer loaded = load_image((dir / "gray.png").string());
  CHECK(loaded.channels() == 1);

  CHECK_THROWS_AS(load_image((dir / "missing.png").string()), Error);
  CHECK_THROWS_AS(save_image(img, (dir / "bad.tiff").string()), Error);
}
