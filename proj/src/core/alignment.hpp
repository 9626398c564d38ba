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

#ifndef PRID_CORE_ALIGNMENT_HPP_
#define PRID_CORE_ALIGNMENT_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "core/imaging.hpp"

namespace prid {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// The 14 body joints, in the order used everywhere (serialization included).
enum class JointName : int {
  head = 0,
  neck,
  rightshoulder,
  rightelbow,
  rightwrist,
  leftshoulder,
  leftelbow,
  leftwrist,
  lefthip,
  leftknee,
  leftankle,
  righthip,
  rightknee,
  rightankle,
};

inline constexpr int kJointCount = 14;

const char* joint_name(JointName joint);
JointName joint_from_name(const std::string& name);

/// Detected joint: pixel coordinates plus detector confidence in [0,1].
struct Joint {
  double x = 0.0;
  double y = 0.0;
  double m = 0.0;
};

/// One detection result per image: exactly 14 joints in JointName order.
/// Detectors report coordinates even for body parts outside the frame, so
/// x/y are unconstrained; only m is range-checked.
struct JointSet {
  std::array<Joint, kJointCount> joints;

  const Joint& at(JointName name) const {
    return joints[static_cast<int>(name)];
  }
  Joint& at(JointName name) { return joints[static_cast<int>(name)]; }
  void validate() const;
};

/// Canonical frame that inputs are aligned into: per-joint mean coordinates
/// plus the confidence statistics driving reliability filtering.
struct ReferenceFrame {
  int width = 0;
  int height = 0;
  std::array<Point2, kJointCount> mean_xy{};
  std::array<double, kJointCount> conf_mean{};
  std::array<double, kJointCount> conf_std{};  // population std deviation
  double n_sigma = 3.0;
};

/// Per-joint averages over the training set. conf_std is the population
/// (biased) standard deviation, so a single sample yields 0.
ReferenceFrame compute_reference(std::span<const JointSet> training_joints,
                                 int width, int height, double n_sigma = 3.0);

/// Joint k is reliable iff |m_k - conf_mean[k]| <= n_sigma * conf_std[k].
/// With zero variance the confidence must match the mean exactly.
std::vector<JointName> select_reliable(const JointSet& joints,
                                       const ReferenceFrame& ref);

/// Closed-form least squares fit of scale s and translation t minimizing
/// sum_i ||s*src_i + t - dst_i||^2. A non-positive fitted scale is clamped
/// to min_scale and the translation recomputed.
SimilarityTransform estimate_similarity(std::span<const Point2> src_points,
                                        std::span<const Point2> dst_points,
                                        double min_scale = 1e-3);

struct AlignResult {
  ImageBuffer image;
  ValidityMask mask;
  SimilarityTransform transform;
  int n_reliable = 0;
  bool used_fallback = false;
};

/// Warps the image into the reference frame using the transform estimated
/// from reliable joints. With fewer than two reliable joints (or a
/// degenerate configuration) it falls back to a plain resize with an
/// all-valid mask, so alignment never hard-fails.
AlignResult align_image(const ImageBuffer& image, const JointSet& joints,
                        const ReferenceFrame& ref);

/// One line-delimited JSON record per image:
///   {"image": path, "joints": [{"name", "x", "y", "m"} x14]}
/// Joint order must follow the JointName enumeration.
struct JointRecord {
  std::string image;
  JointSet joints;
};

std::vector<JointRecord> load_joint_records(const std::string& path);
void save_joint_records(const std::vector<JointRecord>& records,
                        const std::string& path);

}  // namespace prid

#endif  // PRID_CORE_ALIGNMENT_HPP_
