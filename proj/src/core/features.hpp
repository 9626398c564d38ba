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

#ifndef PRID_CORE_FEATURES_HPP_
#define PRID_CORE_FEATURES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/imaging.hpp"
#include "core/rng.hpp"

namespace prid {

/// Per-stride descriptor matrix: n_strides rows of dim values, stride-major.
struct StrideFeatures {
  int n_strides = 0;
  int dim = 0;
  std::vector<double> values;

  StrideFeatures() = default;
  StrideFeatures(int n_strides, int dim)
      : n_strides(n_strides), dim(dim),
        values(static_cast<std::size_t>(n_strides) * dim, 0.0) {}

  std::span<const double> stride(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
  std::span<double> stride(int i) {
    return {values.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

/// Combined representation over the hallucinated and aligned frames:
/// stride i holds [f_i(h) || f_i(phi)], each of length dim, so the total
/// length is dim * n_strides * 2.
struct CombinedFeature {
  int n_strides = 0;
  int dim = 0;  // per-source per-stride dimensionality
  std::vector<double> values;

  CombinedFeature() = default;
  CombinedFeature(int n_strides, int dim)
      : n_strides(n_strides), dim(dim),
        values(static_cast<std::size_t>(n_strides) * dim * 2, 0.0) {}

  int total_length() const { return n_strides * dim * 2; }
  std::span<const double> stride(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * dim * 2,
            static_cast<std::size_t>(dim) * 2};
  }
  std::span<double> stride(int i) {
    return {values.data() + static_cast<std::size_t>(i) * dim * 2,
            static_cast<std::size_t>(dim) * 2};
  }
};

/// Pluggable image -> StrideFeatures slot with a fixed output shape. The
/// toolkit ships a histogram embedder; externally computed per-stride
/// features can be dropped in through the feature-file interface.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual int n_strides() const = 0;
  virtual int dim() const = 0;
  virtual StrideFeatures embed(const ImageBuffer& image) const = 0;
};

/// Splits the image into n horizontal bands with boundaries floor(i*H/n).
/// Bands are disjoint and cover the image.
std::vector<ImageBuffer> extract_strides(const ImageBuffer& image, int n);

/// Per stride, per channel: normalized intensity histogram (each channel
/// sums to 1), concatenated to dim = channels * bins_per_channel.
StrideFeatures histogram_embed(const ImageBuffer& image, int n_strides,
                               int bins_per_channel);

class HistogramEmbedder : public Embedder {
 public:
  HistogramEmbedder(int n_strides, int bins_per_channel, int channels)
      : n_strides_(n_strides), bins_(bins_per_channel), channels_(channels) {}

  int n_strides() const override { return n_strides_; }
  int dim() const override { return channels_ * bins_; }
  StrideFeatures embed(const ImageBuffer& image) const override {
    return histogram_embed(image, n_strides_, bins_);
  }

 private:
  int n_strides_;
  int bins_;
  int channels_;
};

/// Fixed per-stride linear projection applied to each source before
/// concatenation, used to reach a configured target dimensionality (the
/// paper-shape preset projects to 256). Deterministic given the seed.
struct StrideProjection {
  int n_strides = 0;
  int in_dim = 0;
  int out_dim = 0;
  std::vector<double> weights;  // per stride: out_dim x in_dim, row-major

  static StrideProjection seeded(int n_strides, int in_dim, int out_dim,
                                 std::uint64_t seed);
  StrideFeatures apply(const StrideFeatures& features) const;
};

/// Per-stride concatenation [f_i(h) || f_i(phi)]. When a projection is
/// given it is applied to both sources first; when l2_normalize is set each
/// per-source stride vector is scaled to unit norm (zero vectors pass
/// through).
CombinedFeature combine(const StrideFeatures& h_feats,
                        const StrideFeatures& phi_feats,
                        const StrideProjection* projection = nullptr,
                        bool l2_normalize = false);

/// Euclidean distance over the full concatenated vector.
double feature_distance(const CombinedFeature& a, const CombinedFeature& b);
double feature_distance(std::span<const double> a, std::span<const double> b);

/// One linear map per stride from the combined per-stride vector (2*dim)
/// to identity scores.
struct StrideClassifier {
  int n_strides = 0;
  int feature_dim = 0;  // per-stride input length (2*dim)
  int n_classes = 0;
  std::vector<double> weights;  // per stride: n_classes x feature_dim
  std::vector<double> biases;   // per stride: n_classes

  std::vector<double> scores(const CombinedFeature& feature, int stride) const;
};

struct ClassifierTrainResult {
  StrideClassifier classifier;
  std::vector<double> loss_trace;  // summed cross-entropy per step
};

/// Sum of per-stride softmax cross-entropy losses, minimized by full-batch
/// gradient descent from zero initialization (initial loss is therefore
/// n_strides * ln(n_classes)).
ClassifierTrainResult train_stride_classifier(
    const std::vector<CombinedFeature>& features,
    const std::vector<std::uint64_t>& identities, int steps, double lr);

/// Binary feature file, little-endian: magic "PRIDF1", then 32-bit unsigned
/// {record count, n_strides, dim, sources}, then per record a 64-bit
/// identity key, 32-bit camera index, and dim*n_strides*sources 32-bit
/// reals in stride-major order.
struct FeatureRecord {
  std::uint64_t identity = 0;
  std::uint32_t camera = 0;
  std::vector<float> values;
};

struct FeatureFile {
  std::uint32_t n_strides = 0;
  std::uint32_t dim = 0;      // per-source per-stride dimensionality
  std::uint32_t sources = 1;  // 1 = aligned only, 2 = hallucinated + aligned
  std::vector<FeatureRecord> records;

  std::size_t record_length() const {
    return static_cast<std::size_t>(n_strides) * dim * sources;
  }
};

void save_feature_file(const FeatureFile& file, const std::string& path);
FeatureFile load_feature_file(const std::string& path);

/// Identity keys: decimal labels parse to their value, anything else gets
/// a 64-bit FNV-1a hash.
std::uint64_t identity_key(const std::string& label);

}  // namespace prid

#endif  // PRID_CORE_FEATURES_HPP_
