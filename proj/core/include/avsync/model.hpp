// Copyright 2026 The avsync Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avsync/layers.hpp"
#include "avsync/tape.hpp"

namespace avsync {

struct PoolSpec {
  std::string name;
  Extent3 kernel;
  Extent3 stride;
};

struct ConvBlockSpec {
  std::string name;
  std::size_t out_channels = 0;
  Extent3 kernel;
  Extent3 stride;
  std::optional<PoolSpec> pool;
};

/// One tower: channels-last input volume, conv blocks (conv, batch norm,
/// PReLU, optional max pool), hidden fully connected layers (FC, PReLU,
/// dropout) and a linear embedding head.
struct StreamSpec {
  Shape input;
  std::vector<ConvBlockSpec> blocks;
  std::vector<std::pair<std::string, std::size_t>> hidden;
  std::string head_name;
};

struct Architecture {
  StreamSpec visual;
  StreamSpec audio;
  std::size_t embedding = 64;

  /// The lip (9x60x100x1) and speech (15x40x3) towers with an embedding of `zeta`.
  static Architecture standard(std::size_t zeta = 64);
  /// Same layer kinds and kernels with every channel and hidden width scaled
  /// by `factor` (minimum 1). Used for fast tests.
  Architecture scaled(double factor) const;

  /// Canonical text form; round-trips through parse().
  std::string describe() const;
  static Architecture parse(const std::string& text);
  /// FNV-1a hash of describe().
  std::uint64_t digest() const;
};

enum class Regularizer { kSquaredNorm, kNorm };

struct ModelConfig {
  std::size_t zeta = 64;
  Real mu = Real(1.0);
  Real lambda = Real(1e-4);
  Real rho = Real(0.5);
  Regularizer regularizer = Regularizer::kSquaredNorm;

  void validate() const;
};

struct ForwardOptions {
  Mode mode = Mode::kInfer;
  /// Only consulted in train mode; the frozen selection pass turns it off.
  bool update_bn_stats = true;
  /// Train-mode dropout; the frozen selection pass turns it off.
  bool apply_dropout = true;
  std::uint64_t dropout_seed = 0;
};

/// Per-layer output extents (batch axis excluded), in evaluation order.
using LayerTrace = std::vector<std::pair<std::string, Shape>>;

struct ParameterRef {
  std::string name;
  Tensor* tensor;
  bool regularized;
};

class CoupledModel {
 public:
  CoupledModel(Architecture arch, ModelConfig config, std::uint64_t seed);

  const Architecture& architecture() const { return arch_; }
  const ModelConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }

  /// cubes: [N, 9, 60, 100, 1] (or the configured visual input). Returns [N, zeta].
  Var embed_visual(Var cubes, const ForwardOptions& options, LayerTrace* trace = nullptr);
  /// cubes: [N, 15, 40, 3]. Returns [N, zeta].
  Var embed_audio(Var cubes, const ForwardOptions& options, LayerTrace* trace = nullptr);

  /// Single-cube embeddings. Train mode is rejected (batch norm needs N >= 2).
  std::vector<Real> visual_forward(const Tensor& cube, Mode mode = Mode::kInfer);
  std::vector<Real> audio_forward(const Tensor& cube, Mode mode = Mode::kInfer);

  /// lambda * ||W||^2 (or lambda * ||W||) over conv kernels and FC weights.
  Var regularization(Tape& tape);
  /// Mean contrastive loss over the batch plus the regularization term.
  Var loss(Var visual_embeddings, Var audio_embeddings, std::span<const int> labels);

  /// Learnable tensors in a fixed order.
  std::vector<ParameterRef> parameters();
  /// Batch-norm running statistics in a fixed order.
  std::vector<std::pair<std::string, Tensor*>> buffers();
  std::size_t parameter_count();
  void zero_grad();

 private:
  struct ConvBlock {
    ConvBlockSpec spec;
    Conv3dLayer conv;
    BatchNormLayer bn;
    PReluLayer act;
  };
  struct Hidden {
    std::string name;
    LinearLayer fc;
    PReluLayer act;
  };
  struct Stream {
    StreamSpec spec;
    std::vector<ConvBlock> blocks;
    std::vector<Hidden> hidden;
    LinearLayer head;
  };

  Stream build_stream(const StreamSpec& spec, std::uint64_t seed);
  Var run_stream(Stream& stream, Var x, const ForwardOptions& options, LayerTrace* trace);
  void collect(Stream& stream, const std::string& prefix, std::vector<ParameterRef>& out);

  Architecture arch_;
  ModelConfig config_;
  std::uint64_t seed_;
  Stream visual_;
  Stream audio_;
};

/// Row-wise Euclidean distance sqrt(sum (a - b)^2 + eps) of [N, Z] (or [Z]) inputs; returns [N].
Var pair_distance(Var a, Var b, Real eps = Real(1e-12));
Real pair_distance(std::span<const Real> a, std::span<const Real> b, Real eps = Real(1e-12));

/// Y * D^2 / 2 + (1 - Y) * max(0, mu - D)^2 / 2.
Real contrastive_term(Real distance, int label, Real margin);

struct DistanceLabel {
  Real distance;
  int label;
};

/// Mean contrastive term over the batch plus lambda * regularizer_value.
Real contrastive_loss(std::span<const DistanceLabel> batch, Real margin, Real lambda = 0,
                      Real regularizer_value = 0);

/// Differentiable mean contrastive term; distances is [N] and labels are 0/1.
Var contrastive_loss(Var distances, std::span<const int> labels, Real margin);

}  // namespace avsync
