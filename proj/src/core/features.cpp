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

#include "core/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "core/error.hpp"

namespace prid {

namespace {

void write_u32_le(std::ofstream& out, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 4);
}

void write_u64_le(std::ofstream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint32_t read_u32_le(std::ifstream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64_le(std::ifstream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<ImageBuffer> extract_strides(const ImageBuffer& image, int n) {
  if (n < 1)
    throw Error(ErrorCode::validation, "stride count must be at least 1");
  if (image.height() < n)
    throw Error(ErrorCode::validation,
                "image height " + std::to_string(image.height()) +
                    " is smaller than the stride count " + std::to_string(n));

  std::vector<ImageBuffer> bands;
  bands.reserve(n);
  for (int i = 0; i < n; ++i) {
    int y0 = static_cast<int>(static_cast<std::int64_t>(i) * image.height() / n);
    int y1 = static_cast<int>(static_cast<std::int64_t>(i + 1) * image.height() / n);
    ImageBuffer band(image.width(), y1 - y0, image.channels());
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < image.width(); ++x)
        for (int c = 0; c < image.channels(); ++c)
          band.at(x, y - y0, c) = image.at(x, y, c);
    bands.push_back(std::move(band));
  }
  return bands;
}

StrideFeatures histogram_embed(const ImageBuffer& image, int n_strides,
                               int bins_per_channel) {
  if (bins_per_channel < 2)
    throw Error(ErrorCode::validation, "need at least 2 bins per channel");

  std::vector<ImageBuffer> bands = extract_strides(image, n_strides);
  const int channels = image.channels();
  StrideFeatures features(n_strides, channels * bins_per_channel);
  for (int i = 0; i < n_strides; ++i) {
    const ImageBuffer& band = bands[i];
    auto out = features.stride(i);
    const double pixels = static_cast<double>(band.width()) * band.height();
    for (int y = 0; y < band.height(); ++y)
      for (int x = 0; x < band.width(); ++x)
        for (int c = 0; c < channels; ++c) {
          int bin = std::min(
              bins_per_channel - 1,
              static_cast<int>(band.at(x, y, c) * bins_per_channel));
          out[c * bins_per_channel + bin] += 1.0;
        }
    for (double& v : out) v /= pixels;
  }
  return features;
}

StrideProjection StrideProjection::seeded(int n_strides, int in_dim,
                                          int out_dim, std::uint64_t seed) {
  if (n_strides < 1 || in_dim < 1 || out_dim < 1)
    throw Error(ErrorCode::validation, "projection dimensions must be positive");
  StrideProjection proj;
  proj.n_strides = n_strides;
  proj.in_dim = in_dim;
  proj.out_dim = out_dim;
  proj.weights.resize(static_cast<std::size_t>(n_strides) * out_dim * in_dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (int s = 0; s < n_strides; ++s) {
    SplitMix64 rng = SplitMix64::keyed(seed, static_cast<std::uint64_t>(s));
    double* w = proj.weights.data() +
                static_cast<std::size_t>(s) * out_dim * in_dim;
    for (int i = 0; i < out_dim * in_dim; ++i)
      w[i] = rng.uniform(-scale, scale);
  }
  return proj;
}

StrideFeatures StrideProjection::apply(const StrideFeatures& features) const {
  if (features.n_strides != n_strides || features.dim != in_dim)
    throw Error(ErrorCode::validation,
                "projection shape does not match the features");
  StrideFeatures out(n_strides, out_dim);
  for (int s = 0; s < n_strides; ++s) {
    auto in = features.stride(s);
    auto dst = out.stride(s);
    const double* w =
        weights.data() + static_cast<std::size_t>(s) * out_dim * in_dim;
    for (int o = 0; o < out_dim; ++o) {
      double acc = 0.0;
      const double* row = w + static_cast<std::size_t>(o) * in_dim;
      for (int k = 0; k < in_dim; ++k) acc += row[k] * in[k];
      dst[o] = acc;
    }
  }
  return out;
}

namespace {

void l2_normalize_strides(StrideFeatures& features) {
  for (int s = 0; s < features.n_strides; ++s) {
    auto v = features.stride(s);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& x : v) x /= norm;
  }
}

}  // namespace

CombinedFeature combine(const StrideFeatures& h_feats,
                        const StrideFeatures& phi_feats,
                        const StrideProjection* projection,
                        bool l2_normalize) {
  if (h_feats.n_strides != phi_feats.n_strides || h_feats.dim != phi_feats.dim)
    throw Error(ErrorCode::validation,
                "cannot combine features of different shapes");

  StrideFeatures h = h_feats;
  StrideFeatures phi = phi_feats;
  if (projection) {
    h = projection->apply(h);
    phi = projection->apply(phi);
  }
  if (l2_normalize) {
    l2_normalize_strides(h);
    l2_normalize_strides(phi);
  }

  CombinedFeature out(h.n_strides, h.dim);
  for (int s = 0; s < h.n_strides; ++s) {
    auto dst = out.stride(s);
    auto hs = h.stride(s);
    auto ps = phi.stride(s);
    std::copy(hs.begin(), hs.end(), dst.begin());
    std::copy(ps.begin(), ps.end(), dst.begin() + h.dim);
  }
  return out;
}

double feature_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::validation, "feature vectors differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double feature_distance(const CombinedFeature& a, const CombinedFeature& b) {
  if (a.n_strides != b.n_strides || a.dim != b.dim)
    throw Error(ErrorCode::validation, "feature shapes do not match");
  return feature_distance(std::span<const double>(a.values),
                          std::span<const double>(b.values));
}

std::vector<double> StrideClassifier::scores(const CombinedFeature& feature,
                                             int stride) const {
  auto v = feature.stride(stride);
  if (static_cast<int>(v.size()) != feature_dim)
    throw Error(ErrorCode::validation, "feature stride length mismatch");
  std::vector<double> out(n_classes);
  const double* w = weights.data() +
                    static_cast<std::size_t>(stride) * n_classes * feature_dim;
  const double* b = biases.data() + static_cast<std::size_t>(stride) * n_classes;
  for (int k = 0; k < n_classes; ++k) {
    double acc = b[k];
    const double* row = w + static_cast<std::size_t>(k) * feature_dim;
    for (int i = 0; i < feature_dim; ++i) acc += row[i] * v[i];
    out[k] = acc;
  }
  return out;
}

ClassifierTrainResult train_stride_classifier(
    const std::vector<CombinedFeature>& features,
    const std::vector<std::uint64_t>& identities, int steps, double lr) {
  if (steps < 1)
    throw Error(ErrorCode::validation, "steps must be at least 1");
  if (features.empty() || features.size() != identities.size())
    throw Error(ErrorCode::validation,
                "features and identity labels must pair up");

  // Map identity keys to class indices in order of first appearance.
  std::map<std::uint64_t, int> class_of;
  std::vector<int> labels(features.size());
  for (std::size_t i = 0; i < identities.size(); ++i) {
    auto [it, inserted] =
        class_of.try_emplace(identities[i], static_cast<int>(class_of.size()));
    labels[i] = it->second;
  }
  const int n_classes = static_cast<int>(class_of.size());
  if (n_classes < 2)
    throw Error(ErrorCode::validation,
                "classifier training needs at least two identities");

  const int n_strides = features[0].n_strides;
  const int feature_dim = features[0].dim * 2;
  for (const CombinedFeature& f : features)
    if (f.n_strides != n_strides || f.dim != features[0].dim)
      throw Error(ErrorCode::validation, "inconsistent feature shapes");

  StrideClassifier clf;
  clf.n_strides = n_strides;
  clf.feature_dim = feature_dim;
  clf.n_classes = n_classes;
  clf.weights.assign(
      static_cast<std::size_t>(n_strides) * n_classes * feature_dim, 0.0);
  clf.biases.assign(static_cast<std::size_t>(n_strides) * n_classes, 0.0);

  const double n_samples = static_cast<double>(features.size());
  std::vector<double> trace;
  trace.reserve(steps);
  std::vector<double> probs(n_classes);

  for (int step = 0; step < steps; ++step) {
    std::vector<double> w_grad(clf.weights.size(), 0.0);
    std::vector<double> b_grad(clf.biases.size(), 0.0);
    double loss = 0.0;

    for (std::size_t i = 0; i < features.size(); ++i) {
      for (int s = 0; s < n_strides; ++s) {
        std::vector<double> sc = clf.scores(features[i], s);
        double max_sc = *std::max_element(sc.begin(), sc.end());
        double denom = 0.0;
        for (int k = 0; k < n_classes; ++k) {
          probs[k] = std::exp(sc[k] - max_sc);
          denom += probs[k];
        }
        for (int k = 0; k < n_classes; ++k) probs[k] /= denom;
        loss -= std::log(std::max(probs[labels[i]], 1e-300)) / n_samples;

        auto v = features[i].stride(s);
        double* wg = w_grad.data() +
                     static_cast<std::size_t>(s) * n_classes * feature_dim;
        double* bg = b_grad.data() + static_cast<std::size_t>(s) * n_classes;
        for (int k = 0; k < n_classes; ++k) {
          double g = (probs[k] - (k == labels[i] ? 1.0 : 0.0)) / n_samples;
          bg[k] += g;
          double* row = wg + static_cast<std::size_t>(k) * feature_dim;
          for (int d = 0; d < feature_dim; ++d) row[d] += g * v[d];
        }
      }
    }

    if (!std::isfinite(loss))
      throw Error(ErrorCode::numeric,
                  "classifier training diverged at step " +
                      std::to_string(step));
    trace.push_back(loss);
    for (std::size_t i = 0; i < clf.weights.size(); ++i)
      clf.weights[i] -= lr * w_grad[i];
    for (std::size_t i = 0; i < clf.biases.size(); ++i)
      clf.biases[i] -= lr * b_grad[i];
  }
  return {std::move(clf), std::move(trace)};
}

void save_feature_file(const FeatureFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out.write("PRIDF1", 6);
  write_u32_le(out, static_cast<std::uint32_t>(file.records.size()));
  write_u32_le(out, file.n_strides);
  write_u32_le(out, file.dim);
  write_u32_le(out, file.sources);
  for (const FeatureRecord& rec : file.records) {
    if (rec.values.size() != file.record_length())
      throw Error(ErrorCode::validation, "feature record length mismatch");
    write_u64_le(out, rec.identity);
    write_u32_le(out, rec.camera);
    for (float v : rec.values) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      write_u32_le(out, bits);
    }
  }
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

FeatureFile load_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open feature file " + path);
  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, "PRIDF1", 6) != 0)
    throw Error(ErrorCode::validation, "bad feature file magic in " + path);

  FeatureFile file;
  std::uint32_t count = read_u32_le(in);
  file.n_strides = read_u32_le(in);
  file.dim = read_u32_le(in);
  file.sources = read_u32_le(in);
  if (!in || file.n_strides == 0 || file.dim == 0 ||
      (file.sources != 1 && file.sources != 2))
    throw Error(ErrorCode::validation, "bad feature file header in " + path);

  file.records.resize(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    FeatureRecord& rec = file.records[r];
    rec.identity = read_u64_le(in);
    rec.camera = read_u32_le(in);
    rec.values.resize(file.record_length());
    for (float& v : rec.values) {
      std::uint32_t bits = read_u32_le(in);
      std::memcpy(&v, &bits, 4);
    }
    if (!in)
      throw Error(ErrorCode::io, "truncated feature file " + path);
  }
  return file;
}

std::uint64_t identity_key(const std::string& label) {
  if (!label.empty() &&
      std::all_of(label.begin(), label.end(),
                  [](unsigned char c) { return std::isdigit(c); }) &&
      label.size() <= 19) {
    return std::stoull(label);
  }
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : label) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace prid
