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

#ifndef PRID_CORE_CROPGEN_HPP_
#define PRID_CORE_CROPGEN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/imaging.hpp"
#include "core/rng.hpp"

namespace prid {

/// Parameters of a partial-view dataset: crop area fraction s, minimum
/// overlap o_min between paired crops, and the seed all substreams derive
/// from.
struct CropSpec {
  double s = 0.5;
  double o_min = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Overlap between two equal-area crops: area(a n b) / area(a), in [0,1].
/// The normalization is by crop area, not frame area; paired rects must
/// have equal area.
double overlap(const CropRect& a, const CropRect& b);

/// Draws a pair of square-in-normalized-units crops with side sqrt(s) and
/// overlap >= o_min. Rect a is uniform; rect b is rejection-sampled (cap
/// 10,000 draws), after which it is placed at the largest offset from a
/// that still satisfies the constraint.
std::pair<CropRect, CropRect> sample_crop_pair(const CropSpec& spec,
                                               SplitMix64& rng);

/// One dataset record. For full input frames rect/partner_overlap are
/// absent; generated crops carry both plus the path of the source frame.
struct ManifestRecord {
  std::string identity;
  int camera = 0;
  std::string frame;
  std::optional<CropRect> rect;
  std::optional<double> partner_overlap;
  std::optional<std::string> source;
  std::optional<std::string> mask;  // validity-mask image for aligned frames
};

/// Line-delimited JSON manifest, one record per line.
struct DatasetManifest {
  std::vector<ManifestRecord> records;

  static DatasetManifest load(const std::string& path);
  void save(const std::string& path,
            const std::optional<CropSpec>& spec_echo = std::nullopt) const;
};

struct GenerateResult {
  DatasetManifest manifest;
  int pairs_emitted = 0;
  int identities_skipped = 0;  // identities with frames under one camera only
  double min_overlap = 1.0;
  double mean_overlap = 0.0;
};

/// Emits paired crops for every cross-camera frame pair of the same
/// identity, writes the cropped PNGs under out_dir, and returns the crop
/// manifest. Relative input frame paths are resolved against
/// input_base_dir, while the manifest's `source` field keeps them
/// verbatim. Deterministic given spec.seed: record substreams are keyed by
/// pair index, so parallel schedules cannot change the output.
GenerateResult generate_dataset(const DatasetManifest& frames,
                                const CropSpec& spec,
                                const std::string& out_dir,
                                const std::string& input_base_dir = "");

}  // namespace prid

#endif  // PRID_CORE_CROPGEN_HPP_
