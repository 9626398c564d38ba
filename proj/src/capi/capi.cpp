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

#include "prid/prid.h"

#include <cstring>
#include <string>
#include <vector>

#include "core/alignment.hpp"
#include "core/cropgen.hpp"
#include "core/error.hpp"
#include "core/hallucination.hpp"
#include "core/image_io.hpp"
#include "core/imaging.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"

struct prid_image_t {
  prid::ImageBuffer image;
};
struct prid_mask_t {
  prid::ValidityMask mask;
};
struct prid_joints_t {
  std::vector<prid::JointRecord> records;
};
struct prid_reference_t {
  prid::ReferenceFrame reference;
};

namespace {

thread_local std::string g_last_error;

prid_status status_of(const prid::Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case prid::ErrorCode::validation:
      return PRID_ERR_VALIDATION;
    case prid::ErrorCode::io:
      return PRID_ERR_IO;
    case prid::ErrorCode::numeric:
      return PRID_ERR_NUMERIC;
    case prid::ErrorCode::protocol:
      return PRID_ERR_PROTOCOL;
    case prid::ErrorCode::internal:
      return PRID_ERR_INTERNAL;
  }
  return PRID_ERR_INTERNAL;
}

// Funnels every entry point through one exception boundary.
template <typename Fn>
prid_status guarded(Fn&& fn) {
  try {
    fn();
    return PRID_OK;
  } catch (const prid::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PRID_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PRID_ERR_INTERNAL;
  }
}

prid_status require(bool condition, const char* message) {
  if (condition) return PRID_OK;
  g_last_error = message;
  return PRID_ERR_VALIDATION;
}

prid::CropRect to_crop_rect(prid_rect r) { return {r.x, r.y, r.w, r.h}; }

prid::SimilarityTransform to_transform(prid_transform t) {
  return {t.scale, t.tx, t.ty};
}

}  // namespace

extern "C" {

const char* prid_last_error(void) { return g_last_error.c_str(); }

const char* prid_version(void) { return "0.1.0"; }

/* ----------------------------------------------------------------------- */

prid_status prid_image_load(const char* path, prid_image_t** out) {
  if (prid_status s = require(path && out, "path and out must be non-null"))
    return s;
  return guarded([&] { *out = new prid_image_t{prid::load_image(path)}; });
}

prid_status prid_image_save(const prid_image_t* image, const char* path) {
  if (prid_status s = require(image && path, "image and path must be non-null"))
    return s;
  return guarded([&] { prid::save_image(image->image, path); });
}

prid_status prid_image_create(int32_t width, int32_t height, int32_t channels,
                              const double* data, prid_image_t** out) {
  if (prid_status s = require(data && out, "data and out must be non-null"))
    return s;
  return guarded([&] {
    std::vector<double> values(
        data, data + static_cast<std::size_t>(width) * height * channels);
    *out = new prid_image_t{
        prid::ImageBuffer(width, height, channels, std::move(values))};
  });
}

void prid_image_free(prid_image_t* image) { delete image; }

int32_t prid_image_width(const prid_image_t* image) {
  return image ? image->image.width() : 0;
}
int32_t prid_image_height(const prid_image_t* image) {
  return image ? image->image.height() : 0;
}
int32_t prid_image_channels(const prid_image_t* image) {
  return image ? image->image.channels() : 0;
}
const double* prid_image_data(const prid_image_t* image) {
  return image ? image->image.data().data() : nullptr;
}

prid_status prid_image_resize(const prid_image_t* image, int32_t out_width,
                              int32_t out_height, prid_image_t** out) {
  if (prid_status s = require(image && out, "image and out must be non-null"))
    return s;
  return guarded([&] {
    *out = new prid_image_t{prid::resize(image->image, out_width, out_height)};
  });
}

prid_status prid_image_crop(const prid_image_t* image, prid_rect rect,
                            prid_image_t** out) {
  if (prid_status s = require(image && out, "image and out must be non-null"))
    return s;
  return guarded([&] {
    *out = new prid_image_t{prid::crop(image->image, to_crop_rect(rect))};
  });
}

prid_status prid_image_warp(const prid_image_t* image, prid_transform transform,
                            int32_t out_width, int32_t out_height,
                            prid_image_t** out_image, prid_mask_t** out_mask) {
  if (prid_status s = require(image && out_image && out_mask,
                              "image, out_image and out_mask must be non-null"))
    return s;
  return guarded([&] {
    prid::WarpResult result = prid::warp_similarity(
        image->image, to_transform(transform), out_width, out_height);
    *out_image = new prid_image_t{std::move(result.image)};
    *out_mask = new prid_mask_t{std::move(result.mask)};
  });
}

void prid_mask_free(prid_mask_t* mask) { delete mask; }

int32_t prid_mask_width(const prid_mask_t* mask) {
  return mask ? mask->mask.width : 0;
}
int32_t prid_mask_height(const prid_mask_t* mask) {
  return mask ? mask->mask.height : 0;
}
int32_t prid_mask_at(const prid_mask_t* mask, int32_t x, int32_t y) {
  if (!mask || x < 0 || y < 0 || x >= mask->mask.width || y >= mask->mask.height)
    return 0;
  return mask->mask.at(x, y) ? 1 : 0;
}

prid_status prid_baseline_fill(const prid_image_t* image,
                               const prid_mask_t* mask, prid_image_t** out) {
  if (prid_status s = require(image && mask && out,
                              "image, mask and out must be non-null"))
    return s;
  return guarded([&] {
    *out = new prid_image_t{prid::baseline_fill(image->image, mask->mask)};
  });
}

/* ----------------------------------------------------------------------- */

prid_status prid_joints_load(const char* path, prid_joints_t** out) {
  if (prid_status s = require(path && out, "path and out must be non-null"))
    return s;
  return guarded(
      [&] { *out = new prid_joints_t{prid::load_joint_records(path)}; });
}

void prid_joints_free(prid_joints_t* joints) { delete joints; }

size_t prid_joints_count(const prid_joints_t* joints) {
  return joints ? joints->records.size() : 0;
}

prid_status prid_joints_get(const prid_joints_t* joints, size_t index,
                            double* xy, double* m) {
  if (prid_status s = require(joints, "joints must be non-null")) return s;
  if (prid_status s =
          require(index < joints->records.size(), "joint record index out of range"))
    return s;
  const prid::JointSet& set = joints->records[index].joints;
  for (std::size_t k = 0; k < prid::kJointCount; ++k) {
    if (xy) {
      xy[2 * k] = set.joints[k].x;
      xy[2 * k + 1] = set.joints[k].y;
    }
    if (m) m[k] = set.joints[k].m;
  }
  return PRID_OK;
}

prid_status prid_reference_compute(const prid_joints_t* joints, int32_t width,
                                   int32_t height, double n_sigma,
                                   prid_reference_t** out) {
  if (prid_status s = require(joints && out, "joints and out must be non-null"))
    return s;
  return guarded([&] {
    std::vector<prid::JointSet> sets;
    sets.reserve(joints->records.size());
    for (const prid::JointRecord& rec : joints->records)
      sets.push_back(rec.joints);
    *out = new prid_reference_t{
        prid::compute_reference(sets, width, height, n_sigma)};
  });
}

void prid_reference_free(prid_reference_t* reference) { delete reference; }

prid_status prid_reference_mean_xy(const prid_reference_t* reference,
                                   double* xy) {
  if (prid_status s =
          require(reference && xy, "reference and xy must be non-null"))
    return s;
  for (std::size_t k = 0; k < prid::kJointCount; ++k) {
    xy[2 * k] = reference->reference.mean_xy[k].x;
    xy[2 * k + 1] = reference->reference.mean_xy[k].y;
  }
  return PRID_OK;
}

prid_status prid_estimate_similarity(const double* src_xy, const double* dst_xy,
                                     size_t n_points, prid_transform* out) {
  if (prid_status s = require(src_xy && dst_xy && out,
                              "src_xy, dst_xy and out must be non-null"))
    return s;
  return guarded([&] {
    std::vector<prid::Point2> src(n_points), dst(n_points);
    for (size_t i = 0; i < n_points; ++i) {
      src[i] = {src_xy[2 * i], src_xy[2 * i + 1]};
      dst[i] = {dst_xy[2 * i], dst_xy[2 * i + 1]};
    }
    prid::SimilarityTransform t = prid::estimate_similarity(src, dst);
    *out = {t.scale, t.tx, t.ty};
  });
}

prid_status prid_align_image(const prid_image_t* image,
                             const prid_joints_t* joints, size_t index,
                             const prid_reference_t* reference,
                             prid_image_t** out_image, prid_mask_t** out_mask,
                             prid_transform* out_transform,
                             int32_t* n_reliable, int32_t* used_fallback) {
  if (prid_status s =
          require(image && joints && reference && out_image && out_mask &&
                      out_transform,
                  "image, joints, reference and all outputs must be non-null"))
    return s;
  if (prid_status s =
          require(index < joints->records.size(), "joint record index out of range"))
    return s;
  return guarded([&] {
    prid::AlignResult result = prid::align_image(
        image->image, joints->records[index].joints, reference->reference);
    *out_image = new prid_image_t{std::move(result.image)};
    *out_mask = new prid_mask_t{std::move(result.mask)};
    *out_transform = {result.transform.scale, result.transform.tx,
                      result.transform.ty};
    if (n_reliable) *n_reliable = result.n_reliable;
    if (used_fallback) *used_fallback = result.used_fallback ? 1 : 0;
  });
}

/* ----------------------------------------------------------------------- */

prid_status prid_crop_overlap(prid_rect a, prid_rect b, double* out) {
  if (prid_status s = require(out, "out must be non-null")) return s;
  return guarded(
      [&] { *out = prid::overlap(to_crop_rect(a), to_crop_rect(b)); });
}

prid_status prid_sample_crop_pair(double s, double o_min, uint64_t seed,
                                  uint64_t record_index, prid_rect* out_a,
                                  prid_rect* out_b) {
  if (prid_status st =
          require(out_a && out_b, "out_a and out_b must be non-null"))
    return st;
  return guarded([&] {
    prid::CropSpec spec{s, o_min, seed};
    prid::SplitMix64 rng = prid::SplitMix64::keyed(seed, record_index);
    auto [a, b] = prid::sample_crop_pair(spec, rng);
    *out_a = {a.x, a.y, a.w, a.h};
    *out_b = {b.x, b.y, b.w, b.h};
  });
}

/* ----------------------------------------------------------------------- */

prid_status prid_run(const char* command, const char* config_json,
                     char** report_json) {
  if (prid_status s = require(command && config_json && report_json,
                              "command, config and report must be non-null"))
    return s;
  return guarded([&] {
    nlohmann::json config =
        nlohmann::json::parse(config_json, nullptr, false);
    if (config.is_discarded())
      throw prid::Error(prid::ErrorCode::validation,
                        "config is not valid JSON");
    std::string report = prid::run_command(command, config).dump();
    *report_json = new char[report.size() + 1];
    std::memcpy(*report_json, report.c_str(), report.size() + 1);
  });
}

void prid_string_free(char* s) { delete[] s; }

}  // extern "C"
