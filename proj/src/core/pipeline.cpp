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

#include "core/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include "core/alignment.hpp"
#include "core/cropgen.hpp"
#include "core/error.hpp"
#include "core/evaluation.hpp"
#include "core/features.hpp"
#include "core/hallucination.hpp"
#include "core/image_io.hpp"
#include "core/parallel.hpp"
#include "core/toyset.hpp"

namespace prid {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// --------------------------------------------------------------------------
// Config plumbing

std::string require_string(const json& config, const std::string& key) {
  if (!config.contains(key) || !config.at(key).is_string())
    throw Error(ErrorCode::validation, "config key '" + key +
                                           "' (string) is required");
  return config.at(key).get<std::string>();
}

double get_number(const json& config, const std::string& key, double fallback) {
  if (!config.contains(key)) return fallback;
  if (!config.at(key).is_number())
    throw Error(ErrorCode::validation, "config key '" + key +
                                           "' must be a number");
  return config.at(key).get<double>();
}

std::uint64_t get_u64(const json& config, const std::string& key,
                      std::uint64_t fallback) {
  if (!config.contains(key)) return fallback;
  if (!config.at(key).is_number())
    throw Error(ErrorCode::validation, "config key '" + key +
                                           "' must be a number");
  return config.at(key).get<std::uint64_t>();
}

int get_int(const json& config, const std::string& key, int fallback) {
  return static_cast<int>(get_number(config, key, fallback));
}

bool get_bool(const json& config, const std::string& key, bool fallback) {
  if (!config.contains(key)) return fallback;
  if (!config.at(key).is_boolean())
    throw Error(ErrorCode::validation, "config key '" + key +
                                           "' must be a boolean");
  return config.at(key).get<bool>();
}

std::string resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute()) return p;
  return (base / path).string();
}

void write_config_echo(const json& config, const fs::path& where) {
  std::ofstream out(where);
  if (!out)
    throw Error(ErrorCode::io, "cannot write config echo " + where.string());
  out << config.dump(2) << "\n";
}

// Loads a manifest and resolves record frame paths against its directory.
struct LoadedManifest {
  DatasetManifest manifest;
  fs::path dir;

  std::string frame_path(const ManifestRecord& rec) const {
    return resolve(dir, rec.frame);
  }
  std::string mask_path(const ManifestRecord& rec) const {
    return rec.mask ? resolve(dir, *rec.mask) : std::string();
  }
};

LoadedManifest load_manifest(const std::string& path) {
  LoadedManifest out;
  out.manifest = DatasetManifest::load(path);
  out.dir = fs::path(path).parent_path();
  return out;
}

ImageBuffer to_grayscale(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  ImageBuffer out(img.width(), img.height(), 1);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int c = 0; c < img.channels(); ++c) acc += img.at(x, y, c);
      out.at(x, y, 0) = acc / img.channels();
    }
  return out;
}

ValidityMask mask_from_image(const ImageBuffer& img) {
  ValidityMask mask(img.width(), img.height(), false);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      mask.set(x, y, img.at(x, y, 0) > 0.5);
  return mask;
}

ImageBuffer mask_to_image(const ValidityMask& mask) {
  ImageBuffer img(mask.width, mask.height, 1);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      img.at(x, y, 0) = mask.at(x, y) ? 1.0 : 0.0;
  return img;
}

// --------------------------------------------------------------------------
// gen-crops

json cmd_gen_crops(const json& config) {
  CropSpec spec;
  spec.s = get_number(config, "s", 0.5);
  spec.o_min = get_number(config, "o_min", 0.0);
  spec.seed = get_u64(config, "seed", 0);
  spec.validate();
  std::string manifest_path = require_string(config, "input_manifest");
  std::string out_dir = require_string(config, "out");

  LoadedManifest input = load_manifest(manifest_path);
  GenerateResult result =
      generate_dataset(input.manifest, spec, out_dir, input.dir.string());
  write_config_echo(config, fs::path(out_dir) / "config.json");

  return json{{"command", "gen-crops"},
              {"records", result.manifest.records.size()},
              {"pairs", result.pairs_emitted},
              {"identities_skipped", result.identities_skipped},
              {"min_overlap", result.min_overlap},
              {"mean_overlap", result.mean_overlap},
              {"manifest", (fs::path(out_dir) / "manifest.jsonl").string()}};
}

// --------------------------------------------------------------------------
// align

json cmd_align(const json& config) {
  std::string manifest_path = require_string(config, "input_manifest");
  std::string joints_path = require_string(config, "joints");
  std::string out_dir = require_string(config, "out");
  int ref_width = get_int(config, "ref_width", ToyDataset::kWidth);
  int ref_height = get_int(config, "ref_height", ToyDataset::kHeight);
  double n_sigma = get_number(config, "n_sigma", 3.0);
  std::string ref_joints_path =
      config.contains("ref_joints") ? require_string(config, "ref_joints")
                                    : joints_path;

  LoadedManifest input = load_manifest(manifest_path);
  std::vector<JointRecord> joint_records = load_joint_records(joints_path);
  std::unordered_map<std::string, const JointSet*> joints_by_image;
  for (const JointRecord& rec : joint_records)
    joints_by_image[rec.image] = &rec.joints;

  // Reference statistics come from the training joints, optionally
  // restricted to the cameras listed in ref_cameras.
  std::vector<JointRecord> ref_records = load_joint_records(ref_joints_path);
  std::vector<JointSet> ref_sets;
  if (config.contains("ref_cameras")) {
    std::set<int> cameras;
    for (const auto& v : config.at("ref_cameras")) cameras.insert(v.get<int>());
    std::unordered_map<std::string, int> camera_of;
    for (const ManifestRecord& rec : input.manifest.records)
      camera_of[rec.frame] = rec.camera;
    for (const JointRecord& rec : ref_records) {
      auto it = camera_of.find(rec.image);
      if (it != camera_of.end() && cameras.count(it->second))
        ref_sets.push_back(rec.joints);
    }
  } else {
    for (const JointRecord& rec : ref_records) ref_sets.push_back(rec.joints);
  }
  ReferenceFrame ref = compute_reference(ref_sets, ref_width, ref_height,
                                         n_sigma);

  fs::create_directories(out_dir);
  const int n_records = static_cast<int>(input.manifest.records.size());
  const int threads = get_int(config, "threads", 1);

  // Records are independent: images and masks are written from the
  // workers (one file per record), row data lands in per-index slots so
  // the CSV and manifest come out in input order regardless of threads.
  struct AlignedRow {
    SimilarityTransform transform;
    int n_reliable = 0;
    bool used_fallback = false;
    ManifestRecord record;
  };
  std::vector<AlignedRow> rows(n_records);
  parallel_for(n_records, threads, [&](int i) {
    const ManifestRecord& rec = input.manifest.records[i];
    auto it = joints_by_image.find(rec.frame);
    if (it == joints_by_image.end())
      throw Error(ErrorCode::validation,
                  "no joints for image " + rec.frame + " in " + joints_path);
    ImageBuffer image = load_image(input.frame_path(rec));
    AlignResult result = align_image(image, *it->second, ref);

    fs::path stem = fs::path(rec.frame).stem();
    std::string aligned_name = stem.string() + "_aligned.png";
    std::string mask_name = stem.string() + "_mask.png";
    save_image(result.image, (fs::path(out_dir) / aligned_name).string());
    save_image(mask_to_image(result.mask),
               (fs::path(out_dir) / mask_name).string());

    AlignedRow& row = rows[i];
    row.transform = result.transform;
    row.n_reliable = result.n_reliable;
    row.used_fallback = result.used_fallback;
    row.record.identity = rec.identity;
    row.record.camera = rec.camera;
    row.record.frame = aligned_name;
    row.record.mask = mask_name;
    row.record.source = rec.frame;
  });

  std::ofstream csv(fs::path(out_dir) / "transforms.csv");
  if (!csv) throw Error(ErrorCode::io, "cannot write transforms.csv");
  csv << "image,scale,tx,ty,n_reliable,fallback\n";
  csv.precision(17);

  DatasetManifest aligned_manifest;
  int fallbacks = 0;
  for (int i = 0; i < n_records; ++i) {
    AlignedRow& row = rows[i];
    if (row.used_fallback) ++fallbacks;
    csv << input.manifest.records[i].frame << ',' << row.transform.scale << ','
        << row.transform.tx << ',' << row.transform.ty << ','
        << row.n_reliable << ',' << (row.used_fallback ? 1 : 0) << "\n";
    aligned_manifest.records.push_back(std::move(row.record));
  }

  aligned_manifest.save((fs::path(out_dir) / "manifest.jsonl").string());
  write_config_echo(config, fs::path(out_dir) / "config.json");

  return json{{"command", "align"},
              {"records", aligned_manifest.records.size()},
              {"fallbacks", fallbacks},
              {"ref_width", ref_width},
              {"ref_height", ref_height},
              {"manifest", (fs::path(out_dir) / "manifest.jsonl").string()},
              {"transforms", (fs::path(out_dir) / "transforms.csv").string()}};
}

// --------------------------------------------------------------------------
// hallucinate

Batch flatten_records(const LoadedManifest& input,
                      const std::vector<const ManifestRecord*>& records,
                      int edge) {
  Batch batch(static_cast<int>(records.size()), edge * edge);
  for (std::size_t i = 0; i < records.size(); ++i) {
    ImageBuffer small =
        resize(to_grayscale(load_image(input.frame_path(*records[i]))), edge,
               edge);
    auto row = batch.row(static_cast<int>(i));
    std::copy(small.data().begin(), small.data().end(), row.begin());
  }
  return batch;
}

json cmd_hallucinate(const json& config) {
  std::string manifest_path = require_string(config, "input_manifest");
  std::string out_dir = require_string(config, "out");
  std::string mode = config.contains("mode")
                         ? require_string(config, "mode")
                         : std::string("baseline");
  if (mode != "baseline" && mode != "tiny-trained")
    throw Error(ErrorCode::validation,
                "unknown hallucination mode '" + mode +
                    "' (expected baseline or tiny-trained)");

  LoadedManifest input = load_manifest(manifest_path);
  fs::create_directories(out_dir);

  json report{{"command", "hallucinate"}, {"mode", mode}};

  std::unique_ptr<TwoLayerMap> pcn;
  int edge = get_int(config, "train_edge", 16);
  if (mode == "tiny-trained") {
    int steps = get_int(config, "steps", 200);
    double lr = get_number(config, "lr", 2e-4);
    int batch_size = get_int(config, "batch_size", 8);
    int hidden = get_int(config, "hidden", 16);
    std::uint64_t seed = get_u64(config, "seed", 0);
    CycleObjectiveConfig cfg{get_number(config, "lambda", 10.0)};
    cfg.validate();
    if (steps < 1)
      throw Error(ErrorCode::validation, "steps must be at least 1");
    if (!(lr > 0.0))
      throw Error(ErrorCode::validation, "learning rate must be positive");

    // Partial observations have padded pixels; full views have none.
    std::vector<const ManifestRecord*> phi_records, h_records;
    for (const ManifestRecord& rec : input.manifest.records) {
      std::string mask_path = input.mask_path(rec);
      bool full = true;
      if (!mask_path.empty())
        full = mask_from_image(load_image(mask_path)).all_valid();
      (full ? h_records : phi_records).push_back(&rec);
    }
    if (phi_records.empty() || h_records.empty())
      throw Error(ErrorCode::validation,
                  "tiny-trained mode needs both partial and full records in "
                  "the manifest");

    Batch phi_data = flatten_records(input, phi_records, edge);
    Batch h_data = flatten_records(input, h_records, edge);

    const int dim = edge * edge;
    pcn = std::make_unique<TwoLayerMap>(dim, hidden, dim);
    TwoLayerMap pgn(dim, hidden, dim);
    TwoLayerMap d_phi(dim, 8, 1), d_h(dim, 8, 1);
    SplitMix64 init_rng = SplitMix64::keyed(seed, 0xfeed);
    pcn->randomize(init_rng);
    pgn.randomize(init_rng);
    d_phi.randomize(init_rng);
    d_h.randomize(init_rng);

    SplitMix64 train_rng = SplitMix64::keyed(seed, 0x7ea1);
    std::vector<LossReport> trace =
        train_cycle(pgn, *pcn, d_phi, d_h, phi_data, h_data, cfg, steps, lr,
                    train_rng, batch_size);

    write_loss_trace(trace, (fs::path(out_dir) / "loss_trace.csv").string());
    save_map_parameters(*pcn, (fs::path(out_dir) / "pcn.params").string());
    save_map_parameters(pgn, (fs::path(out_dir) / "pgn.params").string());
    report["steps"] = steps;
    report["initial_l_total"] = trace.front().l_total;
    report["final_l_total"] = trace.back().l_total;
    report["loss_trace"] = (fs::path(out_dir) / "loss_trace.csv").string();
  }

  const int n_records = static_cast<int>(input.manifest.records.size());
  const int threads = get_int(config, "threads", 1);
  std::vector<ManifestRecord> out_records(n_records);
  parallel_for(n_records, threads, [&](int i) {
    const ManifestRecord& rec = input.manifest.records[i];
    ImageBuffer image = load_image(input.frame_path(rec));
    std::string mask_path = input.mask_path(rec);
    ValidityMask mask = mask_path.empty()
                            ? ValidityMask(image.width(), image.height(), true)
                            : mask_from_image(load_image(mask_path));

    ImageBuffer filled = baseline_fill(image, mask);
    if (pcn && !mask.all_valid()) {
      // Composite the learned completion into the padded areas only.
      Batch one(1, edge * edge);
      ImageBuffer small = resize(to_grayscale(image), edge, edge);
      std::copy(small.data().begin(), small.data().end(), one.row(0).begin());
      Batch generated = pcn->forward(one);
      ImageBuffer gen_small(edge, edge, 1,
                            std::vector<double>(generated.values));
      ImageBuffer gen_full = resize(gen_small, image.width(), image.height());
      for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
          if (!mask.at(x, y))
            for (int c = 0; c < image.channels(); ++c)
              filled.at(x, y, c) =
                  std::clamp(gen_full.at(x, y, 0), 0.0, 1.0);
    }

    fs::path stem = fs::path(rec.frame).stem();
    std::string out_name = stem.string() + "_hall.png";
    save_image(filled, (fs::path(out_dir) / out_name).string());

    ManifestRecord& out_rec = out_records[i];
    out_rec.identity = rec.identity;
    out_rec.camera = rec.camera;
    out_rec.frame = out_name;
    out_rec.source = rec.frame;
  });

  DatasetManifest out_manifest;
  out_manifest.records = std::move(out_records);
  out_manifest.save((fs::path(out_dir) / "manifest.jsonl").string());
  write_config_echo(config, fs::path(out_dir) / "config.json");
  report["records"] = out_manifest.records.size();
  report["manifest"] = (fs::path(out_dir) / "manifest.jsonl").string();
  return report;
}

// --------------------------------------------------------------------------
// embed

json cmd_embed(const json& config) {
  std::string aligned_path = require_string(config, "aligned_manifest");
  std::string out_path = require_string(config, "out");
  int n_strides = get_int(config, "n_strides", 6);
  int bins = get_int(config, "bins", 32);
  int target_dim = get_int(config, "dim", 0);
  bool normalize = get_bool(config, "normalize", false);
  std::uint64_t projection_seed = get_u64(config, "projection_seed", 17);
  int threads = get_int(config, "threads", 1);
  if (n_strides < 1)
    throw Error(ErrorCode::validation, "n_strides must be at least 1");
  if (bins < 2)
    throw Error(ErrorCode::validation, "bins must be at least 2");

  LoadedManifest aligned = load_manifest(aligned_path);
  std::optional<LoadedManifest> hallucinated;
  if (config.contains("hallucinated_manifest")) {
    hallucinated = load_manifest(require_string(config, "hallucinated_manifest"));
    if (hallucinated->manifest.records.size() !=
        aligned.manifest.records.size())
      throw Error(ErrorCode::validation,
                  "aligned and hallucinated manifests differ in length");
  }

  const int n_records = static_cast<int>(aligned.manifest.records.size());
  if (n_records == 0)
    throw Error(ErrorCode::validation, "aligned manifest is empty");

  // Probe the first record to fix the histogram dimensionality.
  ImageBuffer probe = load_image(aligned.frame_path(aligned.manifest.records[0]));
  const int hist_dim = probe.channels() * bins;
  std::optional<StrideProjection> projection;
  if (target_dim > 0 && target_dim != hist_dim)
    projection = StrideProjection::seeded(n_strides, hist_dim, target_dim,
                                          projection_seed);
  const int dim = target_dim > 0 ? target_dim : hist_dim;

  FeatureFile file;
  file.n_strides = static_cast<std::uint32_t>(n_strides);
  file.dim = static_cast<std::uint32_t>(dim);
  file.sources = hallucinated ? 2 : 1;
  file.records.resize(n_records);

  auto embed_one = [&](const LoadedManifest& source, int i) {
    const ManifestRecord& rec = source.manifest.records[i];
    StrideFeatures feats =
        histogram_embed(load_image(source.frame_path(rec)), n_strides, bins);
    if (projection) feats = projection->apply(feats);
    return feats;
  };

  parallel_for(n_records, threads, [&](int i) {
    const ManifestRecord& rec = aligned.manifest.records[i];
    FeatureRecord& out = file.records[i];
    out.identity = identity_key(rec.identity);
    out.camera = static_cast<std::uint32_t>(rec.camera);

    StrideFeatures phi_feats = embed_one(aligned, i);
    if (hallucinated) {
      const ManifestRecord& hrec = hallucinated->manifest.records[i];
      if (hrec.identity != rec.identity || hrec.camera != rec.camera)
        throw Error(ErrorCode::validation,
                    "hallucinated manifest record " + std::to_string(i) +
                        " does not pair with the aligned record");
      CombinedFeature combined =
          combine(embed_one(*hallucinated, i), phi_feats, nullptr, normalize);
      out.values.assign(combined.values.begin(), combined.values.end());
    } else {
      if (normalize) {
        StrideFeatures copy = phi_feats;
        CombinedFeature combined = combine(copy, phi_feats, nullptr, true);
        // single-source: keep only the first half of every stride
        out.values.resize(static_cast<std::size_t>(n_strides) * dim);
        for (int s = 0; s < n_strides; ++s) {
          auto src = combined.stride(s);
          std::copy(src.begin(), src.begin() + dim,
                    out.values.begin() + static_cast<std::size_t>(s) * dim);
        }
      } else {
        out.values.assign(phi_feats.values.begin(), phi_feats.values.end());
      }
    }
  });

  save_feature_file(file, out_path);
  write_config_echo(config, fs::path(out_path).string() + ".config.json");

  return json{{"command", "embed"},
              {"records", n_records},
              {"n_strides", n_strides},
              {"dim", dim},
              {"sources", file.sources},
              {"record_length", file.record_length()},
              {"out", out_path}};
}

// --------------------------------------------------------------------------
// eval

json cmd_eval(const json& config) {
  std::string features_path = require_string(config, "features");
  std::string protocol =
      config.contains("protocol") ? require_string(config, "protocol")
                                  : std::string("crop-cuhk03");
  ProtocolConfig pcfg = ProtocolConfig::preset(protocol);
  pcfg.query_camera = get_int(config, "query_camera", pcfg.query_camera);
  pcfg.gallery_camera = get_int(config, "gallery_camera", pcfg.gallery_camera);
  pcfg.exclude_same_camera =
      get_bool(config, "exclude_same_camera", pcfg.exclude_same_camera);
  pcfg.single_shot = get_bool(config, "single_shot", pcfg.single_shot);
  pcfg.seed = get_u64(config, "seed", 0);
  pcfg.threads = get_int(config, "threads", 1);
  int trials = get_int(config, "trials", 10);

  LabeledSet data =
      LabeledSet::from_feature_file(load_feature_file(features_path));
  EvalReport report = run_protocol(pcfg, data, trials);

  json out = json::parse(report.to_json());
  out["command"] = "eval";
  out["features"] = features_path;
  out["table"] = report.to_table();
  if (config.contains("out")) {
    std::string out_path = require_string(config, "out");
    std::ofstream f(out_path);
    if (!f) throw Error(ErrorCode::io, "cannot write report " + out_path);
    f << report.to_json() << "\n";
    write_config_echo(config, out_path + ".config.json");
  }
  return out;
}

// --------------------------------------------------------------------------
// make-toy / demo

json cmd_make_toy(const json& config) {
  std::string out_dir = require_string(config, "out");
  ToyDataset toy = ToyDataset::make();
  toy.write(out_dir);
  write_config_echo(config, fs::path(out_dir) / "config.json");
  return json{{"command", "make-toy"},
              {"records", toy.manifest.records.size()},
              {"identities", ToyDataset::kIdentities},
              {"cameras", ToyDataset::kCameras},
              {"manifest", (fs::path(out_dir) / "manifest.jsonl").string()}};
}

json cmd_demo(const json& config) {
  std::string out_dir = require_string(config, "out");
  std::uint64_t seed = get_u64(config, "seed", 0);
  double s = get_number(config, "s", 0.5);
  double o_min = get_number(config, "o_min", 0.25);
  int trials = get_int(config, "trials", 1);
  fs::path base(out_dir);
  fs::create_directories(base);

  json report{{"command", "demo"}};

  json toy_cfg{{"out", (base / "toy").string()}};
  run_command("make-toy", toy_cfg);
  std::string toy_manifest = (base / "toy" / "manifest.jsonl").string();
  std::string toy_joints = (base / "toy" / "joints.jsonl").string();

  // Partial-view generation on the toy frames.
  report["crops"] = run_command(
      "gen-crops", json{{"input_manifest", toy_manifest},
                        {"s", s},
                        {"o_min", o_min},
                        {"seed", seed},
                        {"out", (base / "crops").string()}});

  // Aligned pipeline: align -> baseline hallucination -> embed -> eval.
  // The reference frame comes from the camera-0 joints (the well-framed
  // training views).
  run_command("align", json{{"input_manifest", toy_manifest},
                            {"joints", toy_joints},
                            {"ref_cameras", json::array({0})},
                            {"out", (base / "aligned").string()}});
  run_command("hallucinate",
              json{{"input_manifest",
                    (base / "aligned" / "manifest.jsonl").string()},
                   {"mode", "baseline"},
                   {"out", (base / "hallucinated").string()}});
  run_command("embed",
              json{{"aligned_manifest",
                    (base / "aligned" / "manifest.jsonl").string()},
                   {"hallucinated_manifest",
                    (base / "hallucinated" / "manifest.jsonl").string()},
                   {"out", (base / "features_aligned.prdf").string()}});
  json aligned_eval = run_command(
      "eval", json{{"features", (base / "features_aligned.prdf").string()},
                   {"protocol", "crop-cuhk03"},
                   {"query_camera", 1},
                   {"trials", trials},
                   {"seed", seed},
                   {"out", (base / "report_aligned.json").string()}});
  report["aligned"] = aligned_eval;

  // Resize-only baseline: embed the raw frames directly.
  run_command("embed", json{{"aligned_manifest", toy_manifest},
                            {"out", (base / "features_baseline.prdf").string()}});
  json baseline_eval = run_command(
      "eval", json{{"features", (base / "features_baseline.prdf").string()},
                   {"protocol", "crop-cuhk03"},
                   {"query_camera", 1},
                   {"trials", trials},
                   {"seed", seed},
                   {"out", (base / "report_baseline.json").string()}});
  report["baseline"] = baseline_eval;

  report["aligned_r1"] = aligned_eval.at("r1");
  report["baseline_r1"] = baseline_eval.at("r1");
  write_config_echo(config, base / "config.json");
  return report;
}

}  // namespace

json run_command(const std::string& command, const json& config) {
  if (!config.is_object())
    throw Error(ErrorCode::validation, "config must be a JSON object");
  if (command == "gen-crops") return cmd_gen_crops(config);
  if (command == "align") return cmd_align(config);
  if (command == "hallucinate") return cmd_hallucinate(config);
  if (command == "embed") return cmd_embed(config);
  if (command == "eval") return cmd_eval(config);
  if (command == "make-toy") return cmd_make_toy(config);
  if (command == "demo") return cmd_demo(config);
  throw Error(ErrorCode::validation, "unknown command: " + command);
}

}  // namespace prid
