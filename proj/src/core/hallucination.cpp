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

#include "core/hallucination.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "core/error.hpp"

namespace prid {

namespace {

void check_batch(const Batch& batch, int expected_dim, const char* what) {
  if (batch.count <= 0)
    throw Error(ErrorCode::validation, std::string(what) + ": empty batch");
  if (batch.dim != expected_dim)
    throw Error(ErrorCode::validation,
                std::string(what) + ": sample dimension " +
                    std::to_string(batch.dim) + " does not match map input " +
                    std::to_string(expected_dim));
}

double mean_abs_diff(const Batch& a, const Batch& b) {
  // mean over samples of the per-sample l1 norm of the difference
  double total = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    total += std::abs(a.values[i] - b.values[i]);
  return total / a.count;
}

void sgd_step(DifferentiableMap& map, std::span<const double> grad, double lr) {
  std::span<const double> params = map.parameters();
  std::vector<double> updated(params.begin(), params.end());
  for (std::size_t i = 0; i < updated.size(); ++i)
    updated[i] -= lr * grad[i];
  map.set_parameters(updated);
}

Batch gather_rows(const Batch& data, std::span<const int> indices) {
  Batch out(static_cast<int>(indices.size()), data.dim);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = data.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(static_cast<int>(i)).begin());
  }
  return out;
}

void write_u64_le(std::ofstream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64_le(std::ifstream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearMap

LinearMap::LinearMap(int in_dim, int out_dim)
    : in_dim_(in_dim), out_dim_(out_dim),
      params_(static_cast<std::size_t>(out_dim) * in_dim + out_dim, 0.0) {
  if (in_dim <= 0 || out_dim <= 0)
    throw Error(ErrorCode::validation, "map dimensions must be positive");
}

LinearMap LinearMap::identity(int dim) {
  LinearMap map(dim, dim);
  for (int i = 0; i < dim; ++i) map.params_[i * dim + i] = 1.0;
  return map;
}

void LinearMap::set_parameters(std::span<const double> params) {
  if (params.size() != params_.size())
    throw Error(ErrorCode::validation, "parameter vector length mismatch");
  std::copy(params.begin(), params.end(), params_.begin());
}

Batch LinearMap::forward(const Batch& inputs) const {
  check_batch(inputs, in_dim_, "LinearMap::forward");
  const double* w = params_.data();
  const double* b = params_.data() + static_cast<std::size_t>(out_dim_) * in_dim_;
  Batch out(inputs.count, out_dim_);
  for (int i = 0; i < inputs.count; ++i) {
    auto x = inputs.row(i);
    auto y = out.row(i);
    for (int o = 0; o < out_dim_; ++o) {
      double acc = b[o];
      const double* wo = w + static_cast<std::size_t>(o) * in_dim_;
      for (int k = 0; k < in_dim_; ++k) acc += wo[k] * x[k];
      y[o] = acc;
    }
  }
  return out;
}

Batch LinearMap::backward(const Batch& inputs, const Batch& output_cotangent,
                          std::span<double> param_grad) const {
  check_batch(inputs, in_dim_, "LinearMap::backward");
  check_batch(output_cotangent, out_dim_, "LinearMap::backward cotangent");
  if (inputs.count != output_cotangent.count)
    throw Error(ErrorCode::validation, "cotangent batch size mismatch");
  if (!param_grad.empty() && param_grad.size() != params_.size())
    throw Error(ErrorCode::validation, "parameter gradient length mismatch");

  const double* w = params_.data();
  const std::size_t bias_off = static_cast<std::size_t>(out_dim_) * in_dim_;
  Batch input_grad(inputs.count, in_dim_);
  for (int i = 0; i < inputs.count; ++i) {
    auto x = inputs.row(i);
    auto cot = output_cotangent.row(i);
    auto xg = input_grad.row(i);
    for (int o = 0; o < out_dim_; ++o) {
      const double* wo = w + static_cast<std::size_t>(o) * in_dim_;
      if (!param_grad.empty()) {
        double* go = param_grad.data() + static_cast<std::size_t>(o) * in_dim_;
        for (int k = 0; k < in_dim_; ++k) go[k] += cot[o] * x[k];
        param_grad[bias_off + o] += cot[o];
      }
      for (int k = 0; k < in_dim_; ++k) xg[k] += wo[k] * cot[o];
    }
  }
  return input_grad;
}

// ---------------------------------------------------------------------------
// TwoLayerMap

TwoLayerMap::TwoLayerMap(int in_dim, int hidden_dim, int out_dim)
    : in_dim_(in_dim), hidden_dim_(hidden_dim), out_dim_(out_dim),
      params_(static_cast<std::size_t>(hidden_dim) * in_dim + hidden_dim +
                  static_cast<std::size_t>(out_dim) * hidden_dim + out_dim,
              0.0) {
  if (in_dim <= 0 || hidden_dim <= 0 || out_dim <= 0)
    throw Error(ErrorCode::validation, "map dimensions must be positive");
}

void TwoLayerMap::set_parameters(std::span<const double> params) {
  if (params.size() != params_.size())
    throw Error(ErrorCode::validation, "parameter vector length mismatch");
  std::copy(params.begin(), params.end(), params_.begin());
}

void TwoLayerMap::randomize(SplitMix64& rng, double weight_scale) {
  for (double& p : params_) p = rng.uniform(-weight_scale, weight_scale);
}

Batch TwoLayerMap::forward(const Batch& inputs) const {
  check_batch(inputs, in_dim_, "TwoLayerMap::forward");
  const double* w1 = params_.data();
  const double* b1 = w1 + static_cast<std::size_t>(hidden_dim_) * in_dim_;
  const double* w2 = b1 + hidden_dim_;
  const double* b2 = w2 + static_cast<std::size_t>(out_dim_) * hidden_dim_;

  Batch out(inputs.count, out_dim_);
  std::vector<double> hidden(hidden_dim_);
  for (int i = 0; i < inputs.count; ++i) {
    auto x = inputs.row(i);
    for (int hdx = 0; hdx < hidden_dim_; ++hdx) {
      double acc = b1[hdx];
      const double* row = w1 + static_cast<std::size_t>(hdx) * in_dim_;
      for (int k = 0; k < in_dim_; ++k) acc += row[k] * x[k];
      hidden[hdx] = std::tanh(acc);
    }
    auto y = out.row(i);
    for (int o = 0; o < out_dim_; ++o) {
      double acc = b2[o];
      const double* row = w2 + static_cast<std::size_t>(o) * hidden_dim_;
      for (int hdx = 0; hdx < hidden_dim_; ++hdx) acc += row[hdx] * hidden[hdx];
      y[o] = acc;
    }
  }
  return out;
}

Batch TwoLayerMap::backward(const Batch& inputs, const Batch& output_cotangent,
                            std::span<double> param_grad) const {
  check_batch(inputs, in_dim_, "TwoLayerMap::backward");
  check_batch(output_cotangent, out_dim_, "TwoLayerMap::backward cotangent");
  if (inputs.count != output_cotangent.count)
    throw Error(ErrorCode::validation, "cotangent batch size mismatch");
  if (!param_grad.empty() && param_grad.size() != params_.size())
    throw Error(ErrorCode::validation, "parameter gradient length mismatch");

  const std::size_t w1_off = 0;
  const std::size_t b1_off = static_cast<std::size_t>(hidden_dim_) * in_dim_;
  const std::size_t w2_off = b1_off + hidden_dim_;
  const std::size_t b2_off =
      w2_off + static_cast<std::size_t>(out_dim_) * hidden_dim_;
  const double* w1 = params_.data() + w1_off;
  const double* b1 = params_.data() + b1_off;
  const double* w2 = params_.data() + w2_off;

  Batch input_grad(inputs.count, in_dim_);
  std::vector<double> hidden(hidden_dim_), hidden_cot(hidden_dim_);
  for (int i = 0; i < inputs.count; ++i) {
    auto x = inputs.row(i);
    for (int hdx = 0; hdx < hidden_dim_; ++hdx) {
      double acc = b1[hdx];
      const double* row = w1 + static_cast<std::size_t>(hdx) * in_dim_;
      for (int k = 0; k < in_dim_; ++k) acc += row[k] * x[k];
      hidden[hdx] = std::tanh(acc);
    }
    auto cot = output_cotangent.row(i);
    std::fill(hidden_cot.begin(), hidden_cot.end(), 0.0);
    for (int o = 0; o < out_dim_; ++o) {
      const double* row = w2 + static_cast<std::size_t>(o) * hidden_dim_;
      for (int hdx = 0; hdx < hidden_dim_; ++hdx)
        hidden_cot[hdx] += row[hdx] * cot[o];
      if (!param_grad.empty()) {
        double* g =
            param_grad.data() + w2_off + static_cast<std::size_t>(o) * hidden_dim_;
        for (int hdx = 0; hdx < hidden_dim_; ++hdx)
          g[hdx] += cot[o] * hidden[hdx];
        param_grad[b2_off + o] += cot[o];
      }
    }
    auto xg = input_grad.row(i);
    for (int hdx = 0; hdx < hidden_dim_; ++hdx) {
      double pre_cot = hidden_cot[hdx] * (1.0 - hidden[hdx] * hidden[hdx]);
      const double* row = w1 + static_cast<std::size_t>(hdx) * in_dim_;
      if (!param_grad.empty()) {
        double* g =
            param_grad.data() + w1_off + static_cast<std::size_t>(hdx) * in_dim_;
        for (int k = 0; k < in_dim_; ++k) g[k] += pre_cot * x[k];
        param_grad[b1_off + hdx] += pre_cot;
      }
      for (int k = 0; k < in_dim_; ++k) xg[k] += row[k] * pre_cot;
    }
  }
  return input_grad;
}

// ---------------------------------------------------------------------------
// Objectives

void CycleObjectiveConfig::validate() const {
  if (!(lambda >= 0.0))
    throw Error(ErrorCode::validation, "lambda must be non-negative");
}

double cycle_loss(const DifferentiableMap& pgn, const DifferentiableMap& pcn,
                  const Batch& phi_batch, const Batch& h_batch) {
  check_batch(phi_batch, pcn.input_dim(), "cycle_loss phi");
  check_batch(h_batch, pgn.input_dim(), "cycle_loss h");
  if (pcn.output_dim() != pgn.input_dim() ||
      pgn.output_dim() != pcn.input_dim())
    throw Error(ErrorCode::validation,
                "cycle_loss: generator domains are not mutually inverse");

  Batch phi_round = pgn.forward(pcn.forward(phi_batch));
  Batch h_round = pcn.forward(pgn.forward(h_batch));
  return mean_abs_diff(phi_round, phi_batch) + mean_abs_diff(h_round, h_batch);
}

AdversarialLosses adversarial_losses(const DifferentiableMap& gen,
                                     const DifferentiableMap& disc,
                                     const Batch& real_batch,
                                     const Batch& source_batch) {
  check_batch(real_batch, disc.input_dim(), "adversarial_losses real");
  check_batch(source_batch, gen.input_dim(), "adversarial_losses source");
  if (disc.output_dim() != 1)
    throw Error(ErrorCode::validation,
                "discriminator must output one score per sample");
  if (gen.output_dim() != disc.input_dim())
    throw Error(ErrorCode::validation,
                "generator output does not match discriminator input");

  Batch real_scores = disc.forward(real_batch);
  Batch fake_scores = disc.forward(gen.forward(source_batch));

  double real_term = 0.0;
  for (double s : real_scores.values) real_term += (s - 1.0) * (s - 1.0);
  real_term /= real_scores.count;

  double fake_term = 0.0, gen_term = 0.0;
  for (double s : fake_scores.values) {
    fake_term += s * s;
    gen_term += (s - 1.0) * (s - 1.0);
  }
  fake_term /= fake_scores.count;
  gen_term /= fake_scores.count;

  return {gen_term, real_term + fake_term};
}

LossReport total_loss(const CycleObjectiveConfig& cfg, double l_gan_pgn,
                      double l_gan_pcn, double l_cyc) {
  cfg.validate();
  if (l_cyc < 0.0)
    throw Error(ErrorCode::validation, "cycle loss cannot be negative");
  return {l_gan_pgn, l_gan_pcn, l_cyc,
          l_gan_pgn + l_gan_pcn + cfg.lambda * l_cyc};
}

double disc_loss_with_grad(const DifferentiableMap& gen,
                           const DifferentiableMap& disc, const Batch& real,
                           const Batch& source, std::span<double> disc_grad) {
  Batch real_scores = disc.forward(real);
  Batch fake = gen.forward(source);
  Batch fake_scores = disc.forward(fake);

  double loss = 0.0;
  Batch real_cot(real_scores.count, 1);
  for (int i = 0; i < real_scores.count; ++i) {
    double s = real_scores.values[i];
    loss += (s - 1.0) * (s - 1.0) / real_scores.count;
    real_cot.values[i] = 2.0 * (s - 1.0) / real_scores.count;
  }
  Batch fake_cot(fake_scores.count, 1);
  for (int i = 0; i < fake_scores.count; ++i) {
    double s = fake_scores.values[i];
    loss += s * s / fake_scores.count;
    fake_cot.values[i] = 2.0 * s / fake_scores.count;
  }
  disc.backward(real, real_cot, disc_grad);
  disc.backward(fake, fake_cot, disc_grad);
  return loss;
}

double gen_loss_with_grad(const DifferentiableMap& gen,
                          const DifferentiableMap& disc, const Batch& source,
                          std::span<double> gen_grad) {
  Batch fake = gen.forward(source);
  Batch scores = disc.forward(fake);

  double loss = 0.0;
  Batch score_cot(scores.count, 1);
  for (int i = 0; i < scores.count; ++i) {
    double s = scores.values[i];
    loss += (s - 1.0) * (s - 1.0) / scores.count;
    score_cot.values[i] = 2.0 * (s - 1.0) / scores.count;
  }
  Batch fake_cot = disc.backward(fake, score_cot, {});
  gen.backward(source, fake_cot, gen_grad);
  return loss;
}

double cycle_loss_with_grad(const DifferentiableMap& pgn,
                            const DifferentiableMap& pcn, const Batch& phi,
                            const Batch& h, std::span<double> pgn_grad,
                            std::span<double> pcn_grad) {
  // phi -> PCN -> PGN -> phi
  Batch u = pcn.forward(phi);
  Batch v = pgn.forward(u);
  double loss = 0.0;
  Batch v_cot(v.count, v.dim);
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    double r = v.values[i] - phi.values[i];
    loss += std::abs(r) / phi.count;
    v_cot.values[i] = (r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0)) / phi.count;
  }
  Batch u_cot = pgn.backward(u, v_cot, pgn_grad);
  pcn.backward(phi, u_cot, pcn_grad);

  // h -> PGN -> PCN -> h
  Batch w = pgn.forward(h);
  Batch z = pcn.forward(w);
  Batch z_cot(z.count, z.dim);
  for (std::size_t i = 0; i < z.values.size(); ++i) {
    double r = z.values[i] - h.values[i];
    loss += std::abs(r) / h.count;
    z_cot.values[i] = (r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0)) / h.count;
  }
  Batch w_cot = pcn.backward(w, z_cot, pcn_grad);
  pgn.backward(h, w_cot, pgn_grad);
  return loss;
}

std::vector<LossReport> train_cycle(DifferentiableMap& pgn,
                                    DifferentiableMap& pcn,
                                    DifferentiableMap& d_phi,
                                    DifferentiableMap& d_h,
                                    const Batch& phi_data, const Batch& h_data,
                                    const CycleObjectiveConfig& cfg, int steps,
                                    double lr, SplitMix64& rng,
                                    int batch_size) {
  cfg.validate();
  if (steps < 1)
    throw Error(ErrorCode::validation, "steps must be at least 1");
  if (!(lr >= 0.0))
    throw Error(ErrorCode::validation, "learning rate must be non-negative");
  check_batch(phi_data, pcn.input_dim(), "train_cycle phi data");
  check_batch(h_data, pgn.input_dim(), "train_cycle h data");

  const int phi_mb = std::min(batch_size, phi_data.count);
  const int h_mb = std::min(batch_size, h_data.count);

  std::vector<LossReport> trace;
  trace.reserve(steps);
  for (int step = 0; step < steps; ++step) {
    std::vector<int> phi_idx(phi_mb), h_idx(h_mb);
    for (int& v : phi_idx)
      v = static_cast<int>(rng.next_below(phi_data.count));
    for (int& v : h_idx) v = static_cast<int>(rng.next_below(h_data.count));
    Batch phi_batch = gather_rows(phi_data, phi_idx);
    Batch h_batch = gather_rows(h_data, h_idx);

    // Discriminators first. PGN fakes live in the phi domain, PCN fakes in
    // the h domain.
    std::vector<double> dphi_grad(d_phi.parameter_count(), 0.0);
    disc_loss_with_grad(pgn, d_phi, phi_batch, h_batch, dphi_grad);
    sgd_step(d_phi, dphi_grad, lr);

    std::vector<double> dh_grad(d_h.parameter_count(), 0.0);
    disc_loss_with_grad(pcn, d_h, h_batch, phi_batch, dh_grad);
    sgd_step(d_h, dh_grad, lr);

    // Generators against the refreshed discriminators.
    std::vector<double> pgn_grad(pgn.parameter_count(), 0.0);
    std::vector<double> pcn_grad(pcn.parameter_count(), 0.0);
    double l_gan_pgn = gen_loss_with_grad(pgn, d_phi, h_batch, pgn_grad);
    double l_gan_pcn = gen_loss_with_grad(pcn, d_h, phi_batch, pcn_grad);

    std::vector<double> pgn_cyc(pgn.parameter_count(), 0.0);
    std::vector<double> pcn_cyc(pcn.parameter_count(), 0.0);
    double l_cyc =
        cycle_loss_with_grad(pgn, pcn, phi_batch, h_batch, pgn_cyc, pcn_cyc);
    for (std::size_t i = 0; i < pgn_grad.size(); ++i)
      pgn_grad[i] += cfg.lambda * pgn_cyc[i];
    for (std::size_t i = 0; i < pcn_grad.size(); ++i)
      pcn_grad[i] += cfg.lambda * pcn_cyc[i];

    sgd_step(pgn, pgn_grad, lr);
    sgd_step(pcn, pcn_grad, lr);

    LossReport report = total_loss(cfg, l_gan_pgn, l_gan_pcn, l_cyc);
    if (!std::isfinite(report.l_total))
      throw Error(ErrorCode::numeric,
                  "training diverged at step " + std::to_string(step));
    trace.push_back(report);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Baseline filler

ImageBuffer baseline_fill(const ImageBuffer& aligned, const ValidityMask& mask) {
  if (aligned.width() != mask.width || aligned.height() != mask.height)
    throw Error(ErrorCode::validation,
                "mask dimensions do not match the image");

  const int w = aligned.width();
  const int h = aligned.height();
  const int ch = aligned.channels();

  // Global mean of valid pixels, per channel.
  std::vector<double> global_mean(ch, 0.0);
  std::size_t n_valid = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (mask.at(x, y)) {
        ++n_valid;
        for (int c = 0; c < ch; ++c) global_mean[c] += aligned.at(x, y, c);
      }
  if (n_valid > 0)
    for (int c = 0; c < ch; ++c) global_mean[c] /= static_cast<double>(n_valid);

  ImageBuffer out = aligned;
  std::vector<double> row_mean(ch);
  for (int y = 0; y < h; ++y) {
    int row_valid = 0;
    std::fill(row_mean.begin(), row_mean.end(), 0.0);
    for (int x = 0; x < w; ++x)
      if (mask.at(x, y)) {
        ++row_valid;
        for (int c = 0; c < ch; ++c) row_mean[c] += aligned.at(x, y, c);
      }
    if (row_valid > 0)
      for (int c = 0; c < ch; ++c) row_mean[c] /= row_valid;

    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y)) continue;
      int mx = w - 1 - x;
      if (mask.at(mx, y)) {
        for (int c = 0; c < ch; ++c) out.at(x, y, c) = aligned.at(mx, y, c);
      } else if (row_valid > 0) {
        for (int c = 0; c < ch; ++c) out.at(x, y, c) = row_mean[c];
      } else if (n_valid > 0) {
        for (int c = 0; c < ch; ++c) out.at(x, y, c) = global_mean[c];
      } else {
        for (int c = 0; c < ch; ++c) out.at(x, y, c) = 0.0;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

void save_map_parameters(const DifferentiableMap& map,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out.write("PMNMAP01", 8);
  std::span<const double> params = map.parameters();
  write_u64_le(out, params.size());
  for (double p : params) {
    std::uint64_t bits;
    std::memcpy(&bits, &p, 8);
    write_u64_le(out, bits);
  }
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

void load_map_parameters(DifferentiableMap& map, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "PMNMAP01", 8) != 0)
    throw Error(ErrorCode::validation, "bad parameter file magic in " + path);
  std::uint64_t count = read_u64_le(in);
  if (count != map.parameter_count())
    throw Error(ErrorCode::validation,
                "parameter count mismatch in " + path + ": file has " +
                    std::to_string(count) + ", map expects " +
                    std::to_string(map.parameter_count()));
  std::vector<double> params(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t bits = read_u64_le(in);
    std::memcpy(&params[i], &bits, 8);
  }
  if (!in) throw Error(ErrorCode::io, "truncated parameter file " + path);
  map.set_parameters(params);
}

void write_loss_trace(const std::vector<LossReport>& trace,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << "step,l_gan_pgn,l_gan_pcn,l_cyc,l_total\n";
  out.precision(17);
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << i << ',' << trace[i].l_gan_pgn << ',' << trace[i].l_gan_pcn << ','
        << trace[i].l_cyc << ',' << trace[i].l_total << "\n";
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

}  // namespace prid
