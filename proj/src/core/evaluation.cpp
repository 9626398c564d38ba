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

#include "core/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "core/parallel.hpp"

#include <json.hpp>

#include "core/error.hpp"

namespace prid {

namespace {

// Candidate gallery indices for one query, in gallery record order.
std::vector<int> candidate_indices(const LabeledRecord& query,
                                   const LabeledSet& gallery,
                                   bool exclude_same_camera) {
  std::vector<int> out;
  out.reserve(gallery.records.size());
  for (std::size_t j = 0; j < gallery.records.size(); ++j) {
    const LabeledRecord& g = gallery.records[j];
    if (exclude_same_camera && g.camera == query.camera &&
        g.identity == query.identity)
      continue;
    out.push_back(static_cast<int>(j));
  }
  return out;
}

// Sorted ascending by distance, ties broken by gallery record order.
void sort_by_distance(std::vector<int>& candidates, const DistanceMatrix& dist,
                      int query_index) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) {
                     return dist.at(query_index, a) < dist.at(query_index, b);
                   });
}

}  // namespace

LabeledSet LabeledSet::from_feature_file(const FeatureFile& file) {
  LabeledSet set;
  set.records.reserve(file.records.size());
  for (const FeatureRecord& rec : file.records) {
    LabeledRecord out;
    out.identity = rec.identity;
    out.camera = static_cast<int>(rec.camera);
    out.feature.assign(rec.values.begin(), rec.values.end());
    set.records.push_back(std::move(out));
  }
  return set;
}

void LabeledSet::validate() const {
  if (records.empty())
    throw Error(ErrorCode::validation, "labeled set is empty");
  std::size_t len = records.front().feature.size();
  for (const LabeledRecord& rec : records)
    if (rec.feature.size() != len)
      throw Error(ErrorCode::validation,
                  "labeled set features differ in length");
}

DistanceMatrix distance_matrix(const LabeledSet& queries,
                               const LabeledSet& gallery, int threads) {
  queries.validate();
  gallery.validate();
  if (queries.records.front().feature.size() !=
      gallery.records.front().feature.size())
    throw Error(ErrorCode::validation,
                "query and gallery features differ in length");

  DistanceMatrix dist;
  dist.n_query = static_cast<int>(queries.records.size());
  dist.n_gallery = static_cast<int>(gallery.records.size());
  dist.values.resize(static_cast<std::size_t>(dist.n_query) * dist.n_gallery);
  parallel_for(dist.n_query, threads, [&](int i) {
    for (int j = 0; j < dist.n_gallery; ++j)
      dist.at(i, j) = feature_distance(
          std::span<const double>(queries.records[i].feature),
          std::span<const double>(gallery.records[j].feature));
  });
  return dist;
}

std::vector<double> cmc(const DistanceMatrix& dist, const LabeledSet& queries,
                        const LabeledSet& gallery, bool exclude_same_camera) {
  if (dist.n_query != static_cast<int>(queries.records.size()) ||
      dist.n_gallery != static_cast<int>(gallery.records.size()))
    throw Error(ErrorCode::validation,
                "distance matrix does not match the labeled sets");

  std::vector<double> curve(gallery.records.size(), 0.0);
  for (int i = 0; i < dist.n_query; ++i) {
    const LabeledRecord& q = queries.records[i];
    std::vector<int> candidates =
        candidate_indices(q, gallery, exclude_same_camera);
    sort_by_distance(candidates, dist, i);

    int rank = 0;
    for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
      if (gallery.records[candidates[pos]].identity == q.identity) {
        rank = static_cast<int>(pos) + 1;
        break;
      }
    }
    if (rank == 0)
      throw Error(ErrorCode::protocol,
                  "query " + std::to_string(i) + " (identity " +
                      std::to_string(q.identity) +
                      ") has no valid gallery match");
    curve[rank - 1] += 1.0;
  }

  double acc = 0.0;
  for (double& v : curve) {
    acc += v / dist.n_query;
    v = acc;
  }
  return curve;
}

double mean_average_precision(const DistanceMatrix& dist,
                              const LabeledSet& queries,
                              const LabeledSet& gallery,
                              bool exclude_same_camera) {
  if (dist.n_query != static_cast<int>(queries.records.size()) ||
      dist.n_gallery != static_cast<int>(gallery.records.size()))
    throw Error(ErrorCode::validation,
                "distance matrix does not match the labeled sets");

  double ap_sum = 0.0;
  for (int i = 0; i < dist.n_query; ++i) {
    const LabeledRecord& q = queries.records[i];
    std::vector<int> candidates =
        candidate_indices(q, gallery, exclude_same_camera);
    sort_by_distance(candidates, dist, i);

    int relevant_seen = 0;
    double precision_sum = 0.0;
    for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
      if (gallery.records[candidates[pos]].identity == q.identity) {
        ++relevant_seen;
        precision_sum += static_cast<double>(relevant_seen) / (pos + 1);
      }
    }
    if (relevant_seen == 0)
      throw Error(ErrorCode::protocol,
                  "query " + std::to_string(i) + " (identity " +
                      std::to_string(q.identity) +
                      ") has no valid gallery match");
    ap_sum += precision_sum / relevant_seen;
  }
  return ap_sum / dist.n_query;
}

LabeledSet single_shot_sample(const LabeledSet& gallery_pool, SplitMix64& rng) {
  gallery_pool.validate();

  std::vector<std::uint64_t> identity_order;
  std::map<std::uint64_t, std::vector<int>> by_identity;
  for (std::size_t i = 0; i < gallery_pool.records.size(); ++i) {
    std::uint64_t id = gallery_pool.records[i].identity;
    if (!by_identity.count(id)) identity_order.push_back(id);
    by_identity[id].push_back(static_cast<int>(i));
  }

  LabeledSet out;
  out.records.reserve(identity_order.size());
  for (std::uint64_t id : identity_order) {
    const std::vector<int>& indices = by_identity[id];
    int pick = static_cast<int>(rng.next_below(indices.size()));
    out.records.push_back(gallery_pool.records[indices[pick]]);
  }
  return out;
}

ProtocolConfig ProtocolConfig::preset(const std::string& name) {
  ProtocolConfig cfg;
  cfg.name = name;
  if (name == "crop-cuhk03") {
    cfg.query_camera = 0;
    cfg.gallery_camera = -1;  // all records
    cfg.exclude_same_camera = true;
    cfg.single_shot = false;
  } else if (name == "partial-reid-single-shot") {
    cfg.query_camera = 0;
    cfg.gallery_camera = -2;  // every camera but the query one
    cfg.exclude_same_camera = false;
    cfg.single_shot = true;
  } else if (name == "custom") {
    // caller fills in the fields
  } else {
    throw Error(ErrorCode::validation, "unknown protocol: " + name);
  }
  return cfg;
}

EvalReport run_protocol(const ProtocolConfig& config, const LabeledSet& data,
                        int trials) {
  if (trials < 1)
    throw Error(ErrorCode::validation, "trial count must be at least 1");
  data.validate();

  LabeledSet queries;
  LabeledSet gallery_pool;
  for (const LabeledRecord& rec : data.records) {
    if (rec.camera == config.query_camera) queries.records.push_back(rec);
    bool in_gallery;
    if (config.gallery_camera == -1)
      in_gallery = true;
    else if (config.gallery_camera == -2)
      in_gallery = rec.camera != config.query_camera;
    else
      in_gallery = rec.camera == config.gallery_camera;
    if (in_gallery) gallery_pool.records.push_back(rec);
  }
  if (queries.records.empty())
    throw Error(ErrorCode::protocol,
                "protocol selected no query records (camera " +
                    std::to_string(config.query_camera) + ")");
  if (gallery_pool.records.empty())
    throw Error(ErrorCode::protocol, "protocol selected no gallery records");

  const int effective_trials = config.single_shot ? trials : 1;
  double r1 = 0.0, r5 = 0.0, r10 = 0.0, map_sum = 0.0;
  for (int t = 0; t < effective_trials; ++t) {
    LabeledSet gallery = gallery_pool;
    if (config.single_shot) {
      SplitMix64 rng = SplitMix64::keyed(config.seed, t);
      gallery = single_shot_sample(gallery_pool, rng);
    }
    DistanceMatrix dist = distance_matrix(queries, gallery, config.threads);
    std::vector<double> curve =
        cmc(dist, queries, gallery, config.exclude_same_camera);
    auto rank_at = [&](int k) {
      int idx = std::min<int>(k, static_cast<int>(curve.size())) - 1;
      return curve[idx];
    };
    r1 += rank_at(1);
    r5 += rank_at(5);
    r10 += rank_at(10);
    map_sum +=
        mean_average_precision(dist, queries, gallery,
                               config.exclude_same_camera);
  }

  EvalReport report;
  report.rank_k[1] = r1 / effective_trials;
  report.rank_k[5] = r5 / effective_trials;
  report.rank_k[10] = r10 / effective_trials;
  report.map_score = map_sum / effective_trials;
  report.protocol = config.name;
  report.trials = effective_trials;
  report.seed = config.seed;
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json j = {{"r1", rank_k.at(1)},      {"r5", rank_k.at(5)},
                      {"r10", rank_k.at(10)},    {"map", map_score},
                      {"protocol", protocol},    {"trials", trials},
                      {"seed", seed}};
  return j.dump();
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-28s %6s %6s %6s %6s\n",
                "protocol", "r1", "r5", "r10", "map");
  out << line;
  std::snprintf(line, sizeof(line), "%-28s %6.3f %6.3f %6.3f %6.3f\n",
                protocol.c_str(), rank_k.at(1), rank_k.at(5), rank_k.at(10),
                map_score);
  out << line;
  return out.str();
}

}  // namespace prid
