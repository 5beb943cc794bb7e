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

#include "avsync/tape.hpp"
#include "avsync/tensor.hpp"

namespace avsync {

/// Per-axis extents in (time, height, width) order.
struct Extent3 {
  std::size_t t = 1;
  std::size_t h = 1;
  std::size_t w = 1;

  friend bool operator==(const Extent3&, const Extent3&) = default;
};

enum class Mode { kTrain, kInfer };

/// Valid (unpadded) sliding-window extent: floor((in - k) / s) + 1.
/// Throws ShapeError when the window does not fit.
std::size_t window_output_extent(std::size_t in, std::size_t kernel, std::size_t stride);

/// Convolution kernels are [out_ch, kT, kH, kW, in_ch]; no padding is ever applied.
struct Conv3dLayer {
  Tensor kernels;
  Tensor bias;
  Extent3 stride;

  static Conv3dLayer create(std::size_t in_channels, std::size_t out_channels, Extent3 kernel, Extent3 stride,
                            std::uint64_t seed);
  std::size_t in_channels() const { return kernels.extent(4); }
  std::size_t out_channels() const { return kernels.extent(0); }
  Extent3 kernel() const { return {kernels.extent(1), kernels.extent(2), kernels.extent(3)}; }
};

struct MaxPool3dLayer {
  Extent3 kernel;
  Extent3 stride;
};

/// One learned negative-side slope per channel (the last axis).
struct PReluLayer {
  Tensor slopes;

  static PReluLayer create(std::size_t channels, Real init = Real(0.25));
};

struct BatchNormLayer {
  Tensor gamma;
  Tensor beta;
  Tensor running_mean;
  Tensor running_var;
  Real momentum = Real(0.1);
  Real eps = Real(1e-5);

  static BatchNormLayer create(std::size_t channels);
  std::size_t channels() const { return gamma.size(); }
};

/// Affine map y = x W + b with W stored [in x out].
struct LinearLayer {
  Tensor weights;
  Tensor bias;

  static LinearLayer create(std::size_t in, std::size_t out, std::uint64_t seed);
  std::size_t in_features() const { return weights.extent(0); }
  std::size_t out_features() const { return weights.extent(1); }
};

/// Zero-mean normal samples with variance 2 / fan_in.
Tensor he_init(const Shape& shape, std::size_t fan_in, std::uint64_t seed);

// Ops. Spatial inputs are channels-last, either [T, H, W, C] or batched
// [N, T, H, W, C]; the output keeps the input's rank.

Var conv3d(Var x, Var kernels, Var bias, Extent3 stride = {});
Var maxpool3d(Var x, Extent3 kernel, Extent3 stride);
Var prelu(Var x, Var slopes);
/// x is [N, ..., C]; statistics are per channel over every other axis.
/// Train mode normalizes with batch statistics (biased variance) and, when
/// `update_running` is set, folds them into the running estimates.
Var batchnorm(Var x, Var gamma, Var beta, BatchNormLayer& state, Mode mode, bool update_running = true);
/// Inverted dropout: train mode zeroes each element with probability rho and
/// scales survivors by 1 / (1 - rho); the mask is a pure function of `seed`.
Var dropout(Var x, Real rho, Mode mode, std::uint64_t seed);
/// x is [N, in] (or [in]); returns [N, out] (or [out]).
Var fully_connected(Var x, Var weights, Var bias);

// Convenience overloads that register the layer's tensors on x's tape.
Var conv3d(Var x, Conv3dLayer& layer);
Var maxpool3d(Var x, const MaxPool3dLayer& layer);
Var prelu(Var x, PReluLayer& layer);
Var batchnorm(Var x, BatchNormLayer& layer, Mode mode, bool update_running = true);
Var fully_connected(Var x, LinearLayer& layer);

}  // namespace avsync
