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

#include "core/cropgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "core/error.hpp"
#include "core/image_io.hpp"

namespace prid {

namespace {

constexpr int kRejectionCap = 10000;

}  // namespace

void CropSpec::validate() const {
  if (!(s > 0.0 && s <= 1.0))
    throw Error(ErrorCode::validation, "area fraction s must be in (0,1]");
  if (!(o_min >= 0.0 && o_min <= 1.0))
    throw Error(ErrorCode::validation, "minimum overlap must be in [0,1]");
}

double overlap(const CropRect& a, const CropRect& b) {
  a.validate();
  b.validate();
  if (std::abs(a.area() - b.area()) > 1e-12)
    throw Error(ErrorCode::validation,
                "overlap is only defined between equal-area crops");
  if (a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h) return 1.0;
  double wx = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  double hy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (wx <= 0.0 || hy <= 0.0) return 0.0;
  return std::clamp(wx / a.w, 0.0, 1.0) * std::clamp(hy / a.h, 0.0, 1.0);
}

std::pair<CropRect, CropRect> sample_crop_pair(const CropSpec& spec,
                                               SplitMix64& rng) {
  spec.validate();
  const double side = std::sqrt(spec.s);
  const double slack = std::max(0.0, 1.0 - side);

  auto draw = [&]() {
    CropRect r;
    r.w = side;
    r.h = side;
    r.x = rng.uniform(0.0, slack);
    r.y = rng.uniform(0.0, slack);
    return r;
  };

  CropRect a = draw();
  for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
    CropRect b = draw();
    if (overlap(a, b) >= spec.o_min) return {a, b};
  }

  // Constructive fallback: the largest diagonal offset with overlap still
  // >= o_min is side*(1 - sqrt(o_min)) per axis; shrink a hair so rounding
  // cannot dip below the bound.
  const double d = side * (1.0 - std::sqrt(spec.o_min)) * (1.0 - 1e-12);
  auto place = [&](double pos) {
    double room_up = slack - pos;
    double room_down = pos;
    if (room_up >= room_down) return pos + std::min(d, room_up);
    return pos - std::min(d, room_down);
  };
  CropRect b = a;
  b.x = place(a.x);
  b.y = place(a.y);
  return {a, b};
}

DatasetManifest DatasetManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open manifest " + path);

  DatasetManifest manifest;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("identity") ||
        !j.contains("camera") || !j.contains("frame"))
      throw Error(ErrorCode::validation,
                  path + " line " + std::to_string(line_no) +
                      ": malformed manifest record");
    ManifestRecord rec;
    const auto& id = j.at("identity");
    rec.identity = id.is_string() ? id.get<std::string>() : id.dump();
    rec.camera = j.at("camera").get<int>();
    rec.frame = j.at("frame").get<std::string>();
    if (j.contains("rect")) {
      const auto& r = j.at("rect");
      rec.rect = CropRect{r.at("x").get<double>(), r.at("y").get<double>(),
                          r.at("w").get<double>(), r.at("h").get<double>()};
    }
    if (j.contains("partner_overlap"))
      rec.partner_overlap = j.at("partner_overlap").get<double>();
    if (j.contains("source")) rec.source = j.at("source").get<std::string>();
    if (j.contains("mask")) rec.mask = j.at("mask").get<std::string>();
    manifest.records.push_back(std::move(rec));
  }
  return manifest;
}

void DatasetManifest::save(const std::string& path,
                           const std::optional<CropSpec>& spec_echo) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write manifest " + path);
  for (const ManifestRecord& rec : records) {
    nlohmann::json j = {{"identity", rec.identity},
                        {"camera", rec.camera},
                        {"frame", rec.frame}};
    if (rec.rect)
      j["rect"] = {{"x", rec.rect->x},
                   {"y", rec.rect->y},
                   {"w", rec.rect->w},
                   {"h", rec.rect->h}};
    if (rec.partner_overlap) j["partner_overlap"] = *rec.partner_overlap;
    if (rec.source) j["source"] = *rec.source;
    if (rec.mask) j["mask"] = *rec.mask;
    if (spec_echo)
      j["spec"] = {{"s", spec_echo->s},
                   {"o_min", spec_echo->o_min},
                   {"seed", spec_echo->seed}};
    out << j.dump() << "\n";
  }
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

GenerateResult generate_dataset(const DatasetManifest& frames,
                                const CropSpec& spec,
                                const std::string& out_dir,
                                const std::string& input_base_dir) {
  spec.validate();
  std::filesystem::create_directories(out_dir);

  // Group input records by identity (first-appearance order), then camera.
  std::vector<std::string> identity_order;
  std::map<std::string, std::map<int, std::vector<const ManifestRecord*>>>
      by_identity;
  for (const ManifestRecord& rec : frames.records) {
    if (!by_identity.count(rec.identity)) identity_order.push_back(rec.identity);
    by_identity[rec.identity][rec.camera].push_back(&rec);
  }

  const std::filesystem::path manifest_dir =
      std::filesystem::path(out_dir);
  std::unordered_map<std::string, ImageBuffer> image_cache;
  auto load_cached = [&](const std::string& frame) -> const ImageBuffer& {
    auto it = image_cache.find(frame);
    if (it != image_cache.end()) return it->second;
    std::filesystem::path path(frame);
    if (path.is_relative() && !input_base_dir.empty())
      path = std::filesystem::path(input_base_dir) / path;
    return image_cache.emplace(frame, load_image(path.string())).first->second;
  };

  GenerateResult result;
  std::map<std::pair<std::string, int>, int> crop_counter;
  double overlap_sum = 0.0;
  std::uint64_t pair_index = 0;

  auto emit = [&](const ManifestRecord& src, const CropRect& rect,
                  double pair_overlap) {
    int index = crop_counter[{src.identity, src.camera}]++;
    std::string name = src.identity + "_" + std::to_string(src.camera) + "_" +
                       std::to_string(index) + ".png";
    save_image(crop(load_cached(src.frame), rect),
               (manifest_dir / name).string());
    ManifestRecord rec;
    rec.identity = src.identity;
    rec.camera = src.camera;
    rec.frame = name;  // relative to the manifest location
    rec.rect = rect;
    rec.partner_overlap = pair_overlap;
    rec.source = src.frame;
    result.manifest.records.push_back(std::move(rec));
  };

  for (const std::string& identity : identity_order) {
    const auto& cameras = by_identity[identity];
    if (cameras.size() < 2) {
      ++result.identities_skipped;
      continue;
    }
    for (auto it1 = cameras.begin(); it1 != cameras.end(); ++it1) {
      for (auto it2 = std::next(it1); it2 != cameras.end(); ++it2) {
        for (const ManifestRecord* ra : it1->second) {
          for (const ManifestRecord* rb : it2->second) {
            SplitMix64 rng = SplitMix64::keyed(spec.seed, pair_index++);
            auto [rect_a, rect_b] = sample_crop_pair(spec, rng);
            double pair_overlap = overlap(rect_a, rect_b);
            emit(*ra, rect_a, pair_overlap);
            emit(*rb, rect_b, pair_overlap);
            result.min_overlap = std::min(result.min_overlap, pair_overlap);
            overlap_sum += pair_overlap;
            ++result.pairs_emitted;
          }
        }
      }
    }
  }

  if (result.pairs_emitted > 0)
    result.mean_overlap = overlap_sum / result.pairs_emitted;
  else
    result.min_overlap = 0.0;

  result.manifest.save((manifest_dir / "manifest.jsonl").string(), spec);
  return result;
}

}  // namespace prid
