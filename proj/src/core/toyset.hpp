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

#ifndef PRID_CORE_TOYSET_HPP_
#define PRID_CORE_TOYSET_HPP_

#include <string>
#include <vector>

#include "core/alignment.hpp"
#include "core/cropgen.hpp"
#include "core/imaging.hpp"

namespace prid {

/// Procedurally drawn striped "pedestrians": every identity is a cyclic
/// shift of one 12-band palette, camera 1 shows the same figure translated
/// down by a fixed pixel offset (the cross-camera misalignment the
/// alignment stage has to undo). Joints are exact and carry confidence 1.
struct ToyDataset {
  static constexpr int kWidth = 48;
  static constexpr int kHeight = 96;
  static constexpr int kIdentities = 8;
  static constexpr int kCameras = 2;
  static constexpr int kShiftPx = 16;  // camera 1 vertical translation

  std::vector<ImageBuffer> images;      // identity-major, camera-minor
  DatasetManifest manifest;             // frame paths filled by write()
  std::vector<JointRecord> joints;

  static ToyDataset make();

  /// Writes images/{id}_{camera}_0.png, manifest.jsonl and joints.jsonl
  /// under dir. Frame paths in the manifest are relative to dir.
  void write(const std::string& dir) const;
};

}  // namespace prid

#endif  // PRID_CORE_TOYSET_HPP_
