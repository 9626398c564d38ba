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

#include "core/toyset.hpp"

#include <filesystem>

#include "core/image_io.hpp"

namespace prid {

namespace {

constexpr int kBands = 12;
constexpr int kBandPx = ToyDataset::kHeight / kBands;

// 12 distinct colors; channel values are multiples of 1/13 so they land in
// distinct histogram bins even after 8-bit quantization.
double palette(int band, int channel) {
  static const int levels[kBands][3] = {
      {1, 6, 8},  {2, 11, 3}, {3, 4, 10}, {4, 9, 5},  {5, 2, 12}, {6, 7, 7},
      {7, 12, 2}, {8, 5, 9},  {9, 10, 4}, {10, 3, 11}, {11, 8, 6}, {12, 1, 1},
  };
  return levels[band][channel] / 13.0;
}

// Joint layout shared by every toy identity (x, y in camera-0 pixels).
const Point2 kJointLayout[kJointCount] = {
    {24, 6},  {24, 14}, {14, 20}, {10, 34}, {8, 48},  {34, 20}, {38, 34},
    {40, 48}, {32, 52}, {33, 70}, {33, 90}, {16, 52}, {15, 70}, {15, 90},
};

ImageBuffer draw_identity(int identity, int shift_px) {
  ImageBuffer img(ToyDataset::kWidth, ToyDataset::kHeight, 3, 0.0);
  for (int y = 0; y < ToyDataset::kHeight; ++y) {
    int source_y = y - shift_px;  // background stays black above the figure
    if (source_y < 0 || source_y >= ToyDataset::kHeight) continue;
    int band = (source_y / kBandPx + identity) % kBands;
    for (int x = 0; x < ToyDataset::kWidth; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = palette(band, c);
  }
  return img;
}

}  // namespace

ToyDataset ToyDataset::make() {
  ToyDataset toy;
  for (int id = 0; id < kIdentities; ++id) {
    for (int cam = 0; cam < kCameras; ++cam) {
      int shift = cam == 1 ? kShiftPx : 0;
      toy.images.push_back(draw_identity(id, shift));

      std::string identity = std::to_string(id);
      std::string name = identity + "_" + std::to_string(cam) + "_0.png";
      ManifestRecord record;
      record.identity = identity;
      record.camera = cam;
      record.frame = name;
      toy.manifest.records.push_back(std::move(record));

      JointRecord rec;
      rec.image = name;
      for (int k = 0; k < kJointCount; ++k)
        rec.joints.joints[k] = {kJointLayout[k].x, kJointLayout[k].y + shift,
                                1.0};
      toy.joints.push_back(std::move(rec));
    }
  }
  return toy;
}

void ToyDataset::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  std::filesystem::path base(dir);
  for (std::size_t i = 0; i < images.size(); ++i)
    save_image(images[i], (base / manifest.records[i].frame).string());
  manifest.save((base / "manifest.jsonl").string());
  save_joint_records(joints, (base / "joints.jsonl").string());
}

}  // namespace prid
