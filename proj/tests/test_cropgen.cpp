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
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "core/cropgen.hpp"
#include "core/error.hpp"
#include "core/image_io.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

using namespace prid;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Three identities, two cameras, one frame each, written as tiny PNGs.
DatasetManifest write_toy_frames(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  DatasetManifest manifest;
  SplitMix64 rng(21);
  for (int id = 0; id < 3; ++id)
    for (int cam = 0; cam < 2; ++cam) {
      ImageBuffer img(16, 32, 3);
      for (double& v : img.data())
        v = static_cast<double>(rng.next_below(256)) / 255.0;
      std::string name =
          std::to_string(id) + "_" + std::to_string(cam) + ".png";
      save_image(img, (dir / name).string());
      ManifestRecord record;
      record.identity = std::to_string(id);
      record.camera = cam;
      record.frame = (dir / name).string();
      manifest.records.push_back(std::move(record));
    }
  return manifest;
}

}  // namespace

TEST_CASE("overlap of a crop with itself is one") {
  CropRect a{0.1, 0.2, 0.5, 0.5};
  CHECK(overlap(a, a) == 1.0);
}

TEST_CASE("overlap of half-shifted quarter crops is one half") {
  CropRect a{0.0, 0.0, 0.5, 0.5};
  CropRect b{0.25, 0.0, 0.5, 0.5};
  CHECK(overlap(a, b) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("overlap of disjoint crops is zero") {
  CropRect a{0.0, 0.0, 0.3, 0.3};
  CropRect b{0.5, 0.5, 0.3, 0.3};
  CHECK(overlap(a, b) == 0.0);
}

TEST_CASE("overlap requires equal areas") {
  CropRect a{0.0, 0.0, 0.5, 0.5};
  CropRect b{0.0, 0.0, 0.4, 0.4};
  CHECK_THROWS_AS(overlap(a, b), Error);
}

TEST_CASE("overlap agrees with the rectangle intersection oracle") {
  SplitMix64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    double side = rng.uniform(0.2, 0.6);
    CropRect a{rng.uniform(0.0, 1.0 - side), rng.uniform(0.0, 1.0 - side),
               side, side};
    CropRect b{rng.uniform(0.0, 1.0 - side), rng.uniform(0.0, 1.0 - side),
               side, side};
    double expected =
        oracles::rect_overlap(a.x, a.y, a.w, a.h, b.x, b.y, b.w, b.h);
    CHECK(overlap(a, b) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("sample_crop_pair emits sides of exactly sqrt(s)") {
  for (double s : {0.25, 0.5, 0.75, 1.0}) {
    CropSpec spec{s, 0.0, 5};
    SplitMix64 rng = SplitMix64::keyed(spec.seed, 0);
    auto [a, b] = sample_crop_pair(spec, rng);
    CHECK(a.w == std::sqrt(s));
    CHECK(a.h == a.w);
    CHECK(b.w == a.w);
    CHECK(b.h == a.w);
    CHECK(a.x + a.w <= 1.0 + 1e-12);
    CHECK(b.y + b.h <= 1.0 + 1e-12);
  }
}

TEST_CASE("sample_crop_pair with o_min one returns identical rects") {
  CropSpec spec{0.25, 1.0, 9};
  SplitMix64 rng = SplitMix64::keyed(spec.seed, 0);
  auto [a, b] = sample_crop_pair(spec, rng);
  CHECK(overlap(a, b) == 1.0);
  CHECK(b.x == doctest::Approx(a.x));
  CHECK(b.y == doctest::Approx(a.y));
}

TEST_CASE("sample_crop_pair honors the overlap floor over many draws") {
  CropSpec spec{0.25, 0.5, 42};
  double min_seen = 1.0;
  for (int i = 0; i < 10000; ++i) {
    SplitMix64 rng = SplitMix64::keyed(spec.seed, i);
    auto [a, b] = sample_crop_pair(spec, rng);
    double o = oracles::rect_overlap(a.x, a.y, a.w, a.h, b.x, b.y, b.w, b.h);
    CHECK(o >= spec.o_min);
    min_seen = std::min(min_seen, o);
  }
  CHECK(min_seen >= 0.5);
  CHECK(min_seen <= 0.55);
}

TEST_CASE("crop spec validation") {
  CHECK_THROWS_AS((CropSpec{0.0, 0.0, 0}.validate()), Error);
  CHECK_THROWS_AS((CropSpec{1.5, 0.0, 0}.validate()), Error);
  CHECK_THROWS_AS((CropSpec{0.5, -0.1, 0}.validate()), Error);
  CHECK_THROWS_AS((CropSpec{0.5, 1.1, 0}.validate()), Error);
  CHECK_NOTHROW((CropSpec{1.0, 1.0, 0}.validate()));
}

TEST_CASE("generate_dataset pairs every cross camera frame") {
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "prid_cropgen";
  fs::remove_all(base);
  DatasetManifest frames = write_toy_frames(base / "frames");

  CropSpec spec{0.5, 0.25, 7};
  GenerateResult result =
      generate_dataset(frames, spec, (base / "out").string());
  CHECK(result.pairs_emitted == 3);
  CHECK(result.identities_skipped == 0);
  CHECK(result.manifest.records.size() == 6);
  for (const ManifestRecord& rec : result.manifest.records) {
    REQUIRE(rec.rect.has_value());
    CHECK(rec.rect->w == std::sqrt(spec.s));
    REQUIRE(rec.partner_overlap.has_value());
    CHECK(*rec.partner_overlap >= spec.o_min);
    CHECK(fs::exists(base / "out" / rec.frame));
  }

  // re-verify emitted rect pairs with the oracle
  for (std::size_t i = 0; i + 1 < result.manifest.records.size(); i += 2) {
    const CropRect& a = *result.manifest.records[i].rect;
    const CropRect& b = *result.manifest.records[i + 1].rect;
    CHECK(oracles::rect_overlap(a.x, a.y, a.w, a.h, b.x, b.y, b.w, b.h) >=
          spec.o_min);
  }
}

TEST_CASE("generate_dataset with s=1 reproduces the inputs") {
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "prid_cropgen_full";
  fs::remove_all(base);
  DatasetManifest frames = write_toy_frames(base / "frames");

  CropSpec spec{1.0, 0.0, 3};
  GenerateResult result =
      generate_dataset(frames, spec, (base / "out").string());
  for (const ManifestRecord& rec : result.manifest.records) {
    CHECK(*rec.partner_overlap == 1.0);
    ImageBuffer out = load_image((base / "out" / rec.frame).string());
    ImageBuffer in = load_image(*rec.source);
    REQUIRE(out.width() == in.width());
    REQUIRE(out.height() == in.height());
    for (std::size_t i = 0; i < in.data().size(); ++i)
      CHECK(out.data()[i] == in.data()[i]);
  }
}

TEST_CASE("generate_dataset is deterministic given the seed") {
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "prid_cropgen_det";
  fs::remove_all(base);
  DatasetManifest frames = write_toy_frames(base / "frames");

  CropSpec spec{0.25, 0.5, 42};
  generate_dataset(frames, spec, (base / "a").string());
  generate_dataset(frames, spec, (base / "b").string());
  CHECK(slurp((base / "a" / "manifest.jsonl").string()) ==
        slurp((base / "b" / "manifest.jsonl").string()));

  CropSpec other{0.25, 0.5, 43};
  generate_dataset(frames, other, (base / "c").string());
  CHECK(slurp((base / "a" / "manifest.jsonl").string()) !=
        slurp((base / "c" / "manifest.jsonl").string()));
}

TEST_CASE("generate_dataset skips single camera identities with a count") {
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "prid_cropgen_skip";
  fs::remove_all(base);
  DatasetManifest frames = write_toy_frames(base / "frames");
  // orphan identity with a single camera
  ImageBuffer img(16, 32, 3, 0.5);
  save_image(img, (base / "frames" / "orphan.png").string());
  ManifestRecord orphan;
  orphan.identity = "9";
  orphan.frame = (base / "frames" / "orphan.png").string();
  frames.records.push_back(std::move(orphan));

  CropSpec spec{0.5, 0.0, 1};
  GenerateResult result =
      generate_dataset(frames, spec, (base / "out").string());
  CHECK(result.identities_skipped == 1);
  CHECK(result.pairs_emitted == 3);
}

TEST_CASE("manifests round trip through jsonl") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "prid_manifest_io";
  fs::create_directories(dir);
  std::string path = (dir / "m.jsonl").string();

  DatasetManifest manifest;
  ManifestRecord plain;
  plain.identity = "12";
  plain.frame = "a.png";
  manifest.records.push_back(std::move(plain));
  ManifestRecord rich{"34", 1, "b.png", CropRect{0.1, 0.2, 0.5, 0.5}, 0.75,
                      "src.png", "b_mask.png"};
  manifest.records.push_back(rich);
  manifest.save(path, CropSpec{0.25, 0.5, 42});

  DatasetManifest loaded = DatasetManifest::load(path);
  REQUIRE(loaded.records.size() == 2);
  CHECK(loaded.records[0].identity == "12");
  CHECK_FALSE(loaded.records[0].rect.has_value());
  CHECK(loaded.records[1].rect->w == 0.5);
  CHECK(*loaded.records[1].partner_overlap == 0.75);
  CHECK(*loaded.records[1].source == "src.png");
  CHECK(*loaded.records[1].mask == "b_mask.png");

  CHECK_THROWS_AS(DatasetManifest::load((dir / "missing.jsonl").string()),
                  Error);
  {
    std::ofstream bad(dir / "bad.jsonl");
    bad << "{\"identity\": 1}\n";
  }
  CHECK_THROWS_AS(DatasetManifest::load((dir / "bad.jsonl").string()), Error);
}
