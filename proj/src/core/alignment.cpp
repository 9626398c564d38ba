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

#include "core/alignment.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "core/error.hpp"

namespace prid {

namespace {

constexpr const char* kJointNames[kJointCount] = {
    "head",      "neck",      "rightshoulder", "rightelbow", "rightwrist",
    "leftshoulder", "leftelbow", "leftwrist",  "lefthip",    "leftknee",
    "leftankle", "righthip",  "rightknee",     "rightankle",
};

}  // namespace

const char* joint_name(JointName joint) {
  return kJointNames[static_cast<int>(joint)];
}

JointName joint_from_name(const std::string& name) {
  for (int i = 0; i < kJointCount; ++i)
    if (name == kJointNames[i]) return static_cast<JointName>(i);
  throw Error(ErrorCode::validation, "unknown joint name: " + name);
}

void JointSet::validate() const {
  for (int i = 0; i < kJointCount; ++i) {
    const Joint& j = joints[i];
    if (!(j.m >= 0.0 && j.m <= 1.0))
      throw Error(ErrorCode::validation,
                  std::string("confidence out of [0,1] for joint ") +
                      kJointNames[i]);
    if (!std::isfinite(j.x) || !std::isfinite(j.y))
      throw Error(ErrorCode::validation,
                  std::string("non-finite coordinate for joint ") +
                      kJointNames[i]);
  }
}

ReferenceFrame compute_reference(std::span<const JointSet> training_joints,
                                 int width, int height, double n_sigma) {
  if (training_joints.empty())
    throw Error(ErrorCode::validation,
                "cannot compute a reference frame from an empty training set");
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::validation, "reference dimensions must be positive");
  if (!(n_sigma > 0.0))
    throw Error(ErrorCode::validation, "n_sigma must be positive");

  ReferenceFrame ref;
  ref.width = width;
  ref.height = height;
  ref.n_sigma = n_sigma;

  const double n = static_cast<double>(training_joints.size());
  for (int k = 0; k < kJointCount; ++k) {
    double sx = 0.0, sy = 0.0, sm = 0.0;
    for (const JointSet& set : training_joints) {
      sx += set.joints[k].x;
      sy += set.joints[k].y;
      sm += set.joints[k].m;
    }
    ref.mean_xy[k] = {sx / n, sy / n};
    ref.conf_mean[k] = sm / n;
    double var = 0.0;
    for (const JointSet& set : training_joints) {
      double d = set.joints[k].m - ref.conf_mean[k];
      var += d * d;
    }
    ref.conf_std[k] = std::sqrt(var / n);
  }
  return ref;
}

std::vector<JointName> select_reliable(const JointSet& joints,
                                       const ReferenceFrame& ref) {
  std::vector<JointName> selected;
  selected.reserve(kJointCount);
  for (int k = 0; k < kJointCount; ++k) {
    double m = joints.joints[k].m;
    bool keep;
    if (ref.conf_std[k] == 0.0)
      keep = m == ref.conf_mean[k];
    else
      keep = std::abs(m - ref.conf_mean[k]) <= ref.n_sigma * ref.conf_std[k];
    if (keep) selected.push_back(static_cast<JointName>(k));
  }
  return selected;
}

SimilarityTransform estimate_similarity(std::span<const Point2> src_points,
                                        std::span<const Point2> dst_points,
                                        double min_scale) {
  if (src_points.size() != dst_points.size())
    throw Error(ErrorCode::validation, "point lists differ in length");
  if (src_points.size() < 2)
    throw Error(ErrorCode::validation,
                "similarity estimation needs at least two point pairs");

  const double n = static_cast<double>(src_points.size());
  double sx = 0.0, sy = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < src_points.size(); ++i) {
    sx += src_points[i].x;
    sy += src_points[i].y;
    dx += dst_points[i].x;
    dy += dst_points[i].y;
  }
  const double src_cx = sx / n, src_cy = sy / n;
  const double dst_cx = dx / n, dst_cy = dy / n;

  double cross = 0.0;  // sum <src~, dst~>
  double norm = 0.0;   // sum ||src~||^2
  for (std::size_t i = 0; i < src_points.size(); ++i) {
    double ax = src_points[i].x - src_cx;
    double ay = src_points[i].y - src_cy;
    double bx = dst_points[i].x - dst_cx;
    double by = dst_points[i].y - dst_cy;
    cross += ax * bx + ay * by;
    norm += ax * ax + ay * ay;
  }
  if (norm == 0.0)
    throw Error(ErrorCode::validation,
                "source points are all coincident; transform is degenerate");

  double scale = cross / norm;
  if (scale <= 0.0) scale = min_scale;
  return SimilarityTransform{scale, dst_cx - scale * src_cx,
                             dst_cy - scale * src_cy};
}

AlignResult align_image(const ImageBuffer& image, const JointSet& joints,
                        const ReferenceFrame& ref) {
  std::vector<JointName> reliable = select_reliable(joints, ref);

  if (reliable.size() >= 2) {
    std::vector<Point2> src, dst;
    src.reserve(reliable.size());
    dst.reserve(reliable.size());
    for (JointName k : reliable) {
      const Joint& j = joints.at(k);
      src.push_back({j.x, j.y});
      dst.push_back(ref.mean_xy[static_cast<int>(k)]);
    }
    bool coincident = true;
    for (std::size_t i = 1; i < src.size() && coincident; ++i)
      coincident = src[i].x == src[0].x && src[i].y == src[0].y;
    if (!coincident) {
      SimilarityTransform t = estimate_similarity(src, dst);
      WarpResult warped = warp_similarity(image, t, ref.width, ref.height);
      return {std::move(warped.image), std::move(warped.mask), t,
              static_cast<int>(reliable.size()), false};
    }
  }

  // Too few reliable joints: resize into the reference frame instead.
  SimilarityTransform implied{
      static_cast<double>(ref.height) / image.height(), 0.0, 0.0};
  return {resize(image, ref.width, ref.height),
          ValidityMask(ref.width, ref.height, true), implied,
          static_cast<int>(reliable.size()), true};
}

std::vector<JointRecord> load_joint_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open joints file " + path);

  std::vector<JointRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("image") ||
        !j.contains("joints"))
      throw Error(ErrorCode::validation,
                  path + " line " + std::to_string(line_no) +
                      ": malformed joint record");
    JointRecord rec;
    rec.image = j.at("image").get<std::string>();
    const auto& arr = j.at("joints");
    if (!arr.is_array() || arr.size() != kJointCount)
      throw Error(ErrorCode::validation,
                  path + " line " + std::to_string(line_no) + ": expected " +
                      std::to_string(kJointCount) + " joints");
    for (int k = 0; k < kJointCount; ++k) {
      const auto& entry = arr[k];
      if (!entry.contains("name") || !entry.contains("x") ||
          !entry.contains("y") || !entry.contains("m"))
        throw Error(ErrorCode::validation,
                    path + " line " + std::to_string(line_no) +
                        ": joint entry missing fields");
      if (entry.at("name").get<std::string>() != kJointNames[k])
        throw Error(ErrorCode::validation,
                    path + " line " + std::to_string(line_no) +
                        ": joints out of order, expected " + kJointNames[k]);
      rec.joints.joints[k] = {entry.at("x").get<double>(),
                              entry.at("y").get<double>(),
                              entry.at("m").get<double>()};
    }
    try {
      rec.joints.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::validation, path + " line " +
                                             std::to_string(line_no) + ": " +
                                             e.what());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void save_joint_records(const std::vector<JointRecord>& records,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write joints file " + path);
  for (const JointRecord& rec : records) {
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 0; k < kJointCount; ++k) {
      const Joint& j = rec.joints.joints[k];
      arr.push_back({{"name", kJointNames[k]},
                     {"x", j.x},
                     {"y", j.y},
                     {"m", j.m}});
    }
    nlohmann::json line = {{"image", rec.image}, {"joints", arr}};
    out << line.dump() << "\n";
  }
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

}  // namespace prid
