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

#ifndef PRID_CORE_HALLUCINATION_HPP_
#define PRID_CORE_HALLUCINATION_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/imaging.hpp"
#include "core/rng.hpp"

namespace prid {

/// A batch of flattened samples, row-major: sample i occupies
/// [i*dim, (i+1)*dim).
struct Batch {
  int count = 0;
  int dim = 0;
  std::vector<double> values;

  Batch() = default;
  Batch(int count, int dim)
      : count(count), dim(dim),
        values(static_cast<std::size_t>(count) * dim, 0.0) {}

  std::span<const double> row(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
  std::span<double> row(int i) {
    return {values.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

/// A parametric map with reverse-mode derivatives. Generators and
/// discriminators are all instances of this one abstraction; forward is
/// deterministic given the parameters.
class DifferentiableMap {
 public:
  virtual ~DifferentiableMap() = default;

  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;
  virtual std::span<const double> parameters() const = 0;
  virtual void set_parameters(std::span<const double> params) = 0;

  virtual Batch forward(const Batch& inputs) const = 0;

  /// Reverse-mode step: given the forward inputs and dL/doutput,
  /// accumulates dL/dparameters into param_grad (when non-empty) and
  /// returns dL/dinputs.
  virtual Batch backward(const Batch& inputs, const Batch& output_cotangent,
                         std::span<double> param_grad) const = 0;

  std::size_t parameter_count() const { return parameters().size(); }
};

/// y = W x + b. Parameter layout: W row-major (out x in), then b.
class LinearMap : public DifferentiableMap {
 public:
  LinearMap(int in_dim, int out_dim);
  /// Identity-initialized square map.
  static LinearMap identity(int dim);

  int input_dim() const override { return in_dim_; }
  int output_dim() const override { return out_dim_; }
  std::span<const double> parameters() const override { return params_; }
  void set_parameters(std::span<const double> params) override;
  Batch forward(const Batch& inputs) const override;
  Batch backward(const Batch& inputs, const Batch& output_cotangent,
                 std::span<double> param_grad) const override;

 private:
  int in_dim_;
  int out_dim_;
  std::vector<double> params_;
};

/// y = W2 tanh(W1 x + b1) + b2. Parameter layout: W1 (hidden x in), b1,
/// W2 (out x hidden), b2.
class TwoLayerMap : public DifferentiableMap {
 public:
  TwoLayerMap(int in_dim, int hidden_dim, int out_dim);

  int input_dim() const override { return in_dim_; }
  int output_dim() const override { return out_dim_; }
  std::span<const double> parameters() const override { return params_; }
  void set_parameters(std::span<const double> params) override;
  Batch forward(const Batch& inputs) const override;
  Batch backward(const Batch& inputs, const Batch& output_cotangent,
                 std::span<double> param_grad) const override;

  /// Small random weights; deterministic given the rng state.
  void randomize(SplitMix64& rng, double weight_scale = 0.1);

 private:
  int in_dim_;
  int hidden_dim_;
  int out_dim_;
  std::vector<double> params_;
};

struct CycleObjectiveConfig {
  double lambda = 10.0;  // weight on the cycle term

  void validate() const;
};

/// The three terms of the joint objective plus their weighted total.
struct LossReport {
  double l_gan_pgn = 0.0;
  double l_gan_pcn = 0.0;
  double l_cyc = 0.0;
  double l_total = 0.0;
};

/// mean_i |PGN(PCN(phi_i)) - phi_i|_1 + mean_j |PCN(PGN(h_j)) - h_j|_1.
double cycle_loss(const DifferentiableMap& pgn, const DifferentiableMap& pcn,
                  const Batch& phi_batch, const Batch& h_batch);

struct AdversarialLosses {
  double gen_loss = 0.0;
  double disc_loss = 0.0;
};

/// Least-squares adversarial pair:
///   disc_loss = mean[(D(real)-1)^2] + mean[D(G(source))^2]
///   gen_loss  = mean[(D(G(source))-1)^2]
AdversarialLosses adversarial_losses(const DifferentiableMap& gen,
                                     const DifferentiableMap& disc,
                                     const Batch& real_batch,
                                     const Batch& source_batch);

/// Assembles a LossReport with l_total = l_gan_pgn + l_gan_pcn +
/// lambda * l_cyc.
LossReport total_loss(const CycleObjectiveConfig& cfg, double l_gan_pgn,
                      double l_gan_pcn, double l_cyc);

/// Value + parameter gradient of the discriminator objective.
double disc_loss_with_grad(const DifferentiableMap& gen,
                           const DifferentiableMap& disc, const Batch& real,
                           const Batch& source, std::span<double> disc_grad);

/// Value + parameter gradient of the generator's adversarial term.
double gen_loss_with_grad(const DifferentiableMap& gen,
                          const DifferentiableMap& disc, const Batch& source,
                          std::span<double> gen_grad);

/// Value + parameter gradients (both generators) of the cycle term.
double cycle_loss_with_grad(const DifferentiableMap& pgn,
                            const DifferentiableMap& pcn, const Batch& phi,
                            const Batch& h, std::span<double> pgn_grad,
                            std::span<double> pcn_grad);

/// Alternating SGD on minibatches drawn from the keyed rng: discriminators
/// first, then both generators against gen_loss + lambda * cycle. Returns
/// the per-step LossReport trace (generator-side objective). Throws
/// Error(numeric) naming the step if any loss goes non-finite.
std::vector<LossReport> train_cycle(DifferentiableMap& pgn,
                                    DifferentiableMap& pcn,
                                    DifferentiableMap& d_phi,
                                    DifferentiableMap& d_h,
                                    const Batch& phi_data, const Batch& h_data,
                                    const CycleObjectiveConfig& cfg, int steps,
                                    double lr, SplitMix64& rng,
                                    int batch_size = 8);

/// Deterministic non-learned filler: an invalid pixel takes the
/// horizontally mirrored pixel if that one is valid, else the mean of the
/// valid pixels in its row, else the global mean of valid pixels, else 0.
ImageBuffer baseline_fill(const ImageBuffer& aligned, const ValidityMask& mask);

/// Little-endian 64-bit reals with a 16-byte header: magic "PMNMAP01" and
/// the parameter count as a 64-bit unsigned.
void save_map_parameters(const DifferentiableMap& map, const std::string& path);
void load_map_parameters(DifferentiableMap& map, const std::string& path);

/// CSV columns: step,l_gan_pgn,l_gan_pcn,l_cyc,l_total.
void write_loss_trace(const std::vector<LossReport>& trace,
                      const std::string& path);

}  // namespace prid

#endif  // PRID_CORE_HALLUCINATION_HPP_
