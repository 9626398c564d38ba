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

#ifndef PRID_CORE_EVALUATION_HPP_
#define PRID_CORE_EVALUATION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/features.hpp"
#include "core/rng.hpp"

namespace prid {

/// One query or gallery entry: identity key, camera index, and the flat
/// feature vector (all records in a set share one length).
struct LabeledRecord {
  std::uint64_t identity = 0;
  int camera = 0;
  std::vector<double> feature;
};

struct LabeledSet {
  std::vector<LabeledRecord> records;

  static LabeledSet from_feature_file(const FeatureFile& file);
  void validate() const;
};

struct DistanceMatrix {
  int n_query = 0;
  int n_gallery = 0;
  std::vector<double> values;

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * n_gallery + j];
  }
  double& at(int i, int j) {
    return values[static_cast<std::size_t>(i) * n_gallery + j];
  }
};

/// Entry (i,j) = Euclidean distance between query i and gallery j. Rows
/// are independent; with threads > 1 they are filled in parallel with
/// output identical to the serial order.
DistanceMatrix distance_matrix(const LabeledSet& queries,
                               const LabeledSet& gallery, int threads = 1);

/// Cumulative matching curve: element k-1 is the fraction of queries whose
/// first correct match ranks within the top k. Gallery items are sorted
/// ascending by distance with ties broken by gallery record order. With
/// exclude_same_camera set, gallery items sharing the query's camera AND
/// identity are removed before ranking. A query without any valid
/// same-identity gallery item raises Error(protocol) naming the query.
std::vector<double> cmc(const DistanceMatrix& dist, const LabeledSet& queries,
                        const LabeledSet& gallery, bool exclude_same_camera);

/// Mean over queries of the average precision across all relevant gallery
/// items (raw precision at each relevant rank, no interpolation).
double mean_average_precision(const DistanceMatrix& dist,
                              const LabeledSet& queries,
                              const LabeledSet& gallery,
                              bool exclude_same_camera);

/// Exactly one record per identity, chosen uniformly from that identity's
/// records. Identity order follows first appearance in the pool.
LabeledSet single_shot_sample(const LabeledSet& gallery_pool, SplitMix64& rng);

/// Evaluation protocol descriptor. The named presets configure the custom
/// fields:
///  - crop-cuhk03: queries = query_camera records, gallery = all records,
///    exclude_same_camera on, no single-shot resampling.
///  - partial-reid-single-shot: queries = query_camera records, gallery
///    pool = the remaining records reduced to one record per identity per
///    trial; metrics averaged over trials.
struct ProtocolConfig {
  std::string name = "custom";  // crop-cuhk03 | partial-reid-single-shot | custom
  int query_camera = 0;
  int gallery_camera = -1;  // -1 = all records not selected as queries-only
  bool exclude_same_camera = true;
  bool single_shot = false;
  std::uint64_t seed = 0;
  int threads = 1;  // distance-matrix workers

  static ProtocolConfig preset(const std::string& name);
};

struct EvalReport {
  std::map<int, double> rank_k;  // k in {1, 5, 10}
  double map_score = 0.0;
  std::string protocol;
  int trials = 1;
  std::uint64_t seed = 0;

  std::string to_json() const;
  /// Aligned text table with columns r1 r5 r10 map.
  std::string to_table() const;
};

/// Assembles query/gallery per the protocol, evaluates CMC and mAP, and
/// (for single-shot protocols) averages the metrics over `trials`
/// resampled galleries.
EvalReport run_protocol(const ProtocolConfig& config, const LabeledSet& data,
                        int trials);

}  // namespace prid

#endif  // PRID_CORE_EVALUATION_HPP_
