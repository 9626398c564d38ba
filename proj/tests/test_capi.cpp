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

// Exercises the shared-library surface the way an external client would:
// only prid/prid.h, opaque handles, and status codes.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "prid/prid.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json run_checked(const char* command, const json& config) {
  char* report = nullptr;
  prid_status status = prid_run(command, config.dump().c_str(), &report);
  REQUIRE(status == PRID_OK);
  json parsed = json::parse(report);
  prid_string_free(report);
  return parsed;
}

}  // namespace

TEST_CASE("version and error strings are always available") {
  CHECK(std::string(prid_version()) == "0.1.0");
  CHECK(prid_last_error() != nullptr);
}

TEST_CASE("images create, save, load and free through handles") {
  fs::path dir = fresh_dir("prid_capi_images");
  std::vector<double> data(4 * 3 * 3);
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = static_cast<double>(i % 256) / 255.0;

  prid_image_t* img = nullptr;
  REQUIRE(prid_image_create(4, 3, 3, data.data(), &img) == PRID_OK);
  CHECK(prid_image_width(img) == 4);
  CHECK(prid_image_height(img) == 3);
  CHECK(prid_image_channels(img) == 3);
  CHECK(prid_image_data(img)[5] == data[5]);

  std::string path = (dir / "img.png").string();
  REQUIRE(prid_image_save(img, path.c_str()) == PRID_OK);
  prid_image_t* loaded = nullptr;
  REQUIRE(prid_image_load(path.c_str(), &loaded) == PRID_OK);
  CHECK(prid_image_width(loaded) == 4);
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(prid_image_data(loaded)[i] == data[i]);

  prid_image_free(img);
  prid_image_free(loaded);

  prid_image_t* missing = nullptr;
  CHECK(prid_image_load((dir / "missing.png").string().c_str(), &missing) ==
        PRID_ERR_IO);
  CHECK(std::strlen(prid_last_error()) > 0);
}

TEST_CASE("geometry operations map through the C surface") {
  std::vector<double> data(2 * 2, 0.5);
  prid_image_t* img = nullptr;
  REQUIRE(prid_image_create(2, 2, 1, data.data(), &img) == PRID_OK);

  prid_image_t* resized = nullptr;
  REQUIRE(prid_image_resize(img, 4, 4, &resized) == PRID_OK);
  CHECK(prid_image_width(resized) == 4);

  prid_image_t* cropped = nullptr;
  REQUIRE(prid_image_crop(img, {0.0, 0.0, 0.5, 0.5}, &cropped) == PRID_OK);
  CHECK(prid_image_width(cropped) == 1);

  prid_image_t* warped = nullptr;
  prid_mask_t* mask = nullptr;
  REQUIRE(prid_image_warp(img, {1.0, 1.0, 0.0}, 2, 2, &warped, &mask) ==
          PRID_OK);
  CHECK(prid_mask_at(mask, 0, 0) == 0);
  CHECK(prid_mask_at(mask, 1, 0) == 1);

  prid_image_t* filled = nullptr;
  REQUIRE(prid_baseline_fill(warped, mask, &filled) == PRID_OK);
  CHECK(prid_image_data(filled)[0] == 0.5);  // mirrored from the valid side

  // invalid transform surfaces as a validation status
  prid_image_t* bad = nullptr;
  prid_mask_t* bad_mask = nullptr;
  CHECK(prid_image_warp(img, {0.0, 0.0, 0.0}, 2, 2, &bad, &bad_mask) ==
        PRID_ERR_VALIDATION);

  prid_image_free(img);
  prid_image_free(resized);
  prid_image_free(cropped);
  prid_image_free(warped);
  prid_image_free(filled);
  prid_mask_free(mask);
}

TEST_CASE("alignment flows through joints and reference handles") {
  fs::path dir = fresh_dir("prid_capi_align");
  run_checked("make-toy", {{"out", (dir / "toy").string()}});

  prid_joints_t* joints = nullptr;
  REQUIRE(prid_joints_load((dir / "toy" / "joints.jsonl").string().c_str(),
                           &joints) == PRID_OK);
  REQUIRE(prid_joints_count(joints) == 16);

  double xy[2 * PRID_JOINT_COUNT];
  double m[PRID_JOINT_COUNT];
  REQUIRE(prid_joints_get(joints, 0, xy, m) == PRID_OK);
  CHECK(m[0] == 1.0);

  prid_reference_t* ref = nullptr;
  REQUIRE(prid_reference_compute(joints, 48, 96, 3.0, &ref) == PRID_OK);
  double mean_xy[2 * PRID_JOINT_COUNT];
  REQUIRE(prid_reference_mean_xy(ref, mean_xy) == PRID_OK);

  prid_image_t* frame = nullptr;
  REQUIRE(prid_image_load((dir / "toy" / "0_0_0.png").string().c_str(),
                          &frame) == PRID_OK);
  prid_image_t* aligned = nullptr;
  prid_mask_t* mask = nullptr;
  prid_transform t{};
  int32_t n_reliable = 0, used_fallback = 0;
  REQUIRE(prid_align_image(frame, joints, 0, ref, &aligned, &mask, &t,
                           &n_reliable, &used_fallback) == PRID_OK);
  CHECK(n_reliable == PRID_JOINT_COUNT);
  CHECK(used_fallback == 0);
  CHECK(prid_image_width(aligned) == 48);
  CHECK(prid_image_height(aligned) == 96);

  CHECK(prid_joints_get(joints, 99, xy, m) == PRID_ERR_VALIDATION);

  prid_image_free(frame);
  prid_image_free(aligned);
  prid_mask_free(mask);
  prid_reference_free(ref);
  prid_joints_free(joints);
}

TEST_CASE("similarity estimation matches the exact hand case") {
  double src[] = {0.0, 0.0, 1.0, 0.0, 0.0, 1.0};
  double dst[] = {0.1, 0.0, 2.1, 0.0, 0.1, 2.0};
  prid_transform t{};
  REQUIRE(prid_estimate_similarity(src, dst, 3, &t) == PRID_OK);
  CHECK(std::abs(t.scale - 2.0) < 1e-12);
  CHECK(std::abs(t.tx - 0.1) < 1e-12);
  CHECK(std::abs(t.ty - 0.0) < 1e-12);

  double coincident[] = {1.0, 1.0, 1.0, 1.0};
  CHECK(prid_estimate_similarity(coincident, dst, 2, &t) ==
        PRID_ERR_VALIDATION);
}

TEST_CASE("crop sampling is deterministic per (seed, record)") {
  prid_rect a1{}, b1{}, a2{}, b2{};
  REQUIRE(prid_sample_crop_pair(0.25, 0.5, 42, 3, &a1, &b1) == PRID_OK);
  REQUIRE(prid_sample_crop_pair(0.25, 0.5, 42, 3, &a2, &b2) == PRID_OK);
  CHECK(a1.x == a2.x);
  CHECK(b1.y == b2.y);
  CHECK(a1.w == 0.5);

  double o = 0.0;
  REQUIRE(prid_crop_overlap(a1, b1, &o) == PRID_OK);
  CHECK(o >= 0.5);

  prid_rect other_a{}, other_b{};
  REQUIRE(prid_sample_crop_pair(0.25, 0.5, 42, 4, &other_a, &other_b) ==
          PRID_OK);
  CHECK((other_a.x != a1.x || other_a.y != a1.y));

  CHECK(prid_sample_crop_pair(1.5, 0.5, 1, 0, &a1, &b1) ==
        PRID_ERR_VALIDATION);
}

TEST_CASE("prid_run surfaces reports and validation failures") {
  fs::path dir = fresh_dir("prid_capi_run");
  json report = run_checked("make-toy", {{"out", (dir / "toy").string()}});
  CHECK(report.at("records") == 16);

  char* out = nullptr;
  CHECK(prid_run("nope", "{}", &out) == PRID_ERR_VALIDATION);
  CHECK(prid_run("gen-crops", "not json", &out) == PRID_ERR_VALIDATION);
  CHECK(prid_run(nullptr, "{}", &out) == PRID_ERR_VALIDATION);
}
