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

#include "avsync/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <random>

#include "avsync/errors.hpp"
#include "avsync/ops.hpp"

namespace avsync {
namespace {

using RowMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using Map = Eigen::Map<RowMatrix>;

// Spatial view of a [T,H,W,C] or [N,T,H,W,C] tensor.
struct Volume {
  std::size_t n, t, h, w, c;
  bool batched;

  static Volume of(const Tensor& x, const char* op) {
    if (x.rank() == 4) return {1, x.extent(0), x.extent(1), x.extent(2), x.extent(3), false};
    if (x.rank() == 5) return {x.extent(0), x.extent(1), x.extent(2), x.extent(3), x.extent(4), true};
    throw ShapeError(std::string(op) + ": expected a rank-4 or rank-5 input, got " + shape_string(x.shape()));
  }
  std::size_t sample_size() const { return t * h * w * c; }
  Shape shape(std::size_t tt, std::size_t hh, std::size_t ww, std::size_t cc) const {
    return batched ? Shape{n, tt, hh, ww, cc} : Shape{tt, hh, ww, cc};
  }
};

struct ConvGeometry {
  Volume in;
  std::size_t kt, kh, kw;
  Extent3 stride;
  std::size_t ot, oh, ow, oc;

  std::size_t patch() const { return kt * kh * kw * in.c; }
  std::size_t positions() const { return ot * oh * ow; }
};

// Gathers every receptive field of one sample into a [positions x patch] matrix.
void im2col(const ConvGeometry& g, const Real* x, Real* col) {
  const std::size_t row_len = g.kw * g.in.c;
  Real* dst = col;
  for (std::size_t t = 0; t < g.ot; ++t) {
    for (std::size_t h = 0; h < g.oh; ++h) {
      for (std::size_t w = 0; w < g.ow; ++w) {
        for (std::size_t a = 0; a < g.kt; ++a) {
          for (std::size_t b = 0; b < g.kh; ++b) {
            const Real* src =
                x + (((t * g.stride.t + a) * g.in.h + (h * g.stride.h + b)) * g.in.w + w * g.stride.w) * g.in.c;
            std::copy(src, src + row_len, dst);
            dst += row_len;
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatters patch gradients back onto the sample.
void col2im(const ConvGeometry& g, const Real* col, Real* dx) {
  const std::size_t row_len = g.kw * g.in.c;
  const Real* src = col;
  for (std::size_t t = 0; t < g.ot; ++t) {
    for (std::size_t h = 0; h < g.oh; ++h) {
      for (std::size_t w = 0; w < g.ow; ++w) {
        for (std::size_t a = 0; a < g.kt; ++a) {
          for (std::size_t b = 0; b < g.kh; ++b) {
            Real* dst =
                dx + (((t * g.stride.t + a) * g.in.h + (h * g.stride.h + b)) * g.in.w + w * g.stride.w) * g.in.c;
            for (std::size_t i = 0; i < row_len; ++i) dst[i] += src[i];
            src += row_len;
          }
        }
      }
    }
  }
}

}  // namespace

std::size_t window_output_extent(std::size_t in, std::size_t kernel, std::size_t stride) {
  if (kernel == 0 || stride == 0) throw ShapeError("kernel and stride extents must be >= 1");
  if (kernel > in) {
    throw ShapeError("window of " + std::to_string(kernel) + " does not fit an axis of " + std::to_string(in));
  }
  return (in - kernel) / stride + 1;
}

Tensor he_init(const Shape& shape, std::size_t fan_in, std::uint64_t seed) {
  if (fan_in == 0) throw ConfigError("he_init: fan_in must be >= 1");
  return Tensor::random(shape, {Distribution::kNormal, 0.0, std::sqrt(2.0 / static_cast<double>(fan_in))}, seed);
}

Conv3dLayer Conv3dLayer::create(std::size_t in_channels, std::size_t out_channels, Extent3 kernel, Extent3 stride,
                                std::uint64_t seed) {
  Conv3dLayer layer;
  layer.kernels = he_init({out_channels, kernel.t, kernel.h, kernel.w, in_channels},
                          kernel.t * kernel.h * kernel.w * in_channels, seed);
  layer.kernels.set_requires_grad(true);
  layer.bias = Tensor({out_channels}, Real(0));
  layer.bias.set_requires_grad(true);
  layer.stride = stride;
  return layer;
}

PReluLayer PReluLayer::create(std::size_t channels, Real init) {
  PReluLayer layer;
  layer.slopes = Tensor({channels}, init);
  layer.slopes.set_requires_grad(true);
  return layer;
}

BatchNormLayer BatchNormLayer::create(std::size_t channels) {
  BatchNormLayer layer;
  layer.gamma = Tensor({channels}, Real(1));
  layer.gamma.set_requires_grad(true);
  layer.beta = Tensor({channels}, Real(0));
  layer.beta.set_requires_grad(true);
  layer.running_mean = Tensor({channels}, Real(0));
  layer.running_var = Tensor({channels}, Real(1));
  return layer;
}

LinearLayer LinearLayer::create(std::size_t in, std::size_t out, std::uint64_t seed) {
  LinearLayer layer;
  layer.weights = he_init({in, out}, in, seed);
  layer.weights.set_requires_grad(true);
  layer.bias = Tensor({out}, Real(0));
  layer.bias.set_requires_grad(true);
  return layer;
}

Var conv3d(Var x, Var kernels, Var bias, Extent3 stride) {
  const Tensor& xv = x.value();
  const Tensor& kv = kernels.value();
  ConvGeometry g{Volume::of(xv, "conv3d"), 0, 0, 0, stride, 0, 0, 0, 0};
  if (kv.rank() != 5) throw ShapeError("conv3d: kernels must be [out, kT, kH, kW, in]");
  if (kv.extent(4) != g.in.c) {
    throw ShapeError("conv3d: kernel depth " + std::to_string(kv.extent(4)) + " != input channels " +
                     std::to_string(g.in.c));
  }
  g.oc = kv.extent(0);
  g.kt = kv.extent(1);
  g.kh = kv.extent(2);
  g.kw = kv.extent(3);
  if (bias.value().size() != g.oc) throw ShapeError("conv3d: bias length must equal output channels");
  g.ot = window_output_extent(g.in.t, g.kt, stride.t);
  g.oh = window_output_extent(g.in.h, g.kh, stride.h);
  g.ow = window_output_extent(g.in.w, g.kw, stride.w);

  const auto P = static_cast<Eigen::Index>(g.positions());
  const auto K = static_cast<Eigen::Index>(g.patch());
  const auto O = static_cast<Eigen::Index>(g.oc);
  Tensor out(g.in.shape(g.ot, g.oh, g.ow, g.oc));
  RealBuffer col(g.positions() * g.patch());
  ConstMap wmat(kv.data().data(), O, K);
  Eigen::Map<const Eigen::Matrix<Real, 1, Eigen::Dynamic>> bvec(bias.value().data().data(), O);
  for (std::size_t s = 0; s < g.in.n; ++s) {
    im2col(g, xv.data().data() + s * g.in.sample_size(), col.data());
    Map y(out.data().data() + s * g.positions() * g.oc, P, O);
    y.noalias() = ConstMap(col.data(), P, K) * wmat.transpose();
    y.rowwise() += bvec;
  }

  return x.tape().record(std::move(out), {x, kernels, bias}, [g, P, K, O](BackwardContext& ctx) {
    const Tensor& xv = ctx.input(0);
    const Tensor& kv = ctx.input(1);
    const auto gy = ctx.grad_output();
    const bool need_x = ctx.needs_grad(0);
    const bool need_w = ctx.needs_grad(1);
    const bool need_b = ctx.needs_grad(2);
    RealBuffer col(static_cast<std::size_t>(P * K));
    RealBuffer dcol(need_x ? col.size() : 0);
    for (std::size_t s = 0; s < g.in.n; ++s) {
      ConstMap dy(gy.data() + s * g.positions() * g.oc, P, O);
      if (need_w) {
        im2col(g, xv.data().data() + s * g.in.sample_size(), col.data());
        Map dw(ctx.grad_input(1).data(), O, K);
        dw.noalias() += dy.transpose() * ConstMap(col.data(), P, K);
      }
      if (need_b) {
        auto db = ctx.grad_input(2);
        Eigen::Map<Eigen::Matrix<Real, 1, Eigen::Dynamic>>(db.data(), O) += dy.colwise().sum();
      }
      if (need_x) {
        Map(dcol.data(), P, K).noalias() = dy * ConstMap(kv.data().data(), O, K);
        col2im(g, dcol.data(), ctx.grad_input(0).data() + s * g.in.sample_size());
      }
    }
  });
}

Var maxpool3d(Var x, Extent3 kernel, Extent3 stride) {
  const Tensor& xv = x.value();
  const Volume in = Volume::of(xv, "maxpool3d");
  const std::size_t ot = window_output_extent(in.t, kernel.t, stride.t);
  const std::size_t oh = window_output_extent(in.h, kernel.h, stride.h);
  const std::size_t ow = window_output_extent(in.w, kernel.w, stride.w);
  const std::size_t C = in.c;

  Tensor out(in.shape(ot, oh, ow, C));
  std::vector<std::size_t> argmax(out.size());
  const Real* src = xv.data().data();
  Real* dst = out.data().data();
  std::size_t o = 0;
  for (std::size_t s = 0; s < in.n; ++s) {
    const std::size_t base = s * in.sample_size();
    for (std::size_t t = 0; t < ot; ++t) {
      for (std::size_t h = 0; h < oh; ++h) {
        for (std::size_t w = 0; w < ow; ++w, o += C) {
          bool first = true;
          for (std::size_t a = 0; a < kernel.t; ++a) {
            for (std::size_t b = 0; b < kernel.h; ++b) {
              for (std::size_t d = 0; d < kernel.w; ++d) {
                const std::size_t off =
                    base + (((t * stride.t + a) * in.h + (h * stride.h + b)) * in.w + (w * stride.w + d)) * C;
                for (std::size_t c = 0; c < C; ++c) {
                  // Strict comparison keeps the first maximum in scan order.
                  if (first || src[off + c] > dst[o + c]) {
                    dst[o + c] = src[off + c];
                    argmax[o + c] = off + c;
                  }
                }
                first = false;
              }
            }
          }
        }
      }
    }
  }
  return x.tape().record(std::move(out), {x}, [argmax = std::move(argmax)](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    auto gi = ctx.grad_input(0);
    for (std::size_t i = 0; i < g.size(); ++i) gi[argmax[i]] += g[i];
  });
}

Var prelu(Var x, Var slopes) {
  const Tensor& xv = x.value();
  const Tensor& av = slopes.value();
  const std::size_t C = xv.shape().back();
  const bool shared = av.size() == 1;
  if (!shared && av.size() != C) {
    throw ShapeError("prelu: expected 1 or " + std::to_string(C) + " slopes, got " + std::to_string(av.size()));
  }
  // Slopes expanded to one per channel so the loops below index by column.
  std::vector<Real> a(C, av[0]);
  if (!shared) std::copy(av.data().begin(), av.data().end(), a.begin());
  const std::size_t rows = xv.size() / C;
  Tensor out(xv.shape());
  const Real* xs = xv.data().data();
  Real* o = out.data().data();
  for (std::size_t r = 0; r < rows; ++r, xs += C, o += C) {
    for (std::size_t c = 0; c < C; ++c) o[c] = xs[c] >= 0 ? xs[c] : a[c] * xs[c];
  }
  return x.tape().record(std::move(out), {x, slopes}, [C, rows, shared, a = std::move(a)](BackwardContext& ctx) {
    const Real* g = ctx.grad_output().data();
    const Real* xs = ctx.input(0).data().data();
    if (ctx.needs_grad(0)) {
      Real* gx = ctx.grad_input(0).data();
      for (std::size_t i = 0, r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < C; ++c, ++i) gx[i] += xs[i] >= 0 ? g[i] : a[c] * g[i];
      }
    }
    if (ctx.needs_grad(1)) {
      std::vector<Real> acc(C, Real(0));
      for (std::size_t i = 0, r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < C; ++c, ++i) acc[c] += xs[i] < 0 ? g[i] * xs[i] : Real(0);
      }
      auto ga = ctx.grad_input(1);
      for (std::size_t c = 0; c < C; ++c) ga[shared ? 0 : c] += acc[c];
    }
  });
}

Var batchnorm(Var x, Var gamma, Var beta, BatchNormLayer& state, Mode mode, bool update_running) {
  const Tensor& xv = x.value();
  if (xv.rank() < 2) throw ShapeError("batchnorm: input must be [N, ..., C]");
  const std::size_t C = xv.shape().back();
  if (gamma.value().size() != C || beta.value().size() != C || state.running_mean.size() != C) {
    throw ShapeError("batchnorm: parameter length does not match " + std::to_string(C) + " channels");
  }
  const std::size_t rows = xv.size() / C;
  if (mode == Mode::kTrain && xv.extent(0) < 2) {
    throw ContractError("batchnorm: train mode needs a batch of at least 2");
  }

  std::vector<Real> mean(C, Real(0)), inv_std(C, Real(0));
  auto xs = xv.data();
  if (mode == Mode::kTrain) {
    std::vector<double> sum(C, 0.0), sq(C, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < C; ++c) sum[c] += xs[r * C + c];
    }
    for (std::size_t c = 0; c < C; ++c) sum[c] /= static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < C; ++c) {
        const double d = xs[r * C + c] - sum[c];
        sq[c] += d * d;
      }
    }
    for (std::size_t c = 0; c < C; ++c) {
      const double var = sq[c] / static_cast<double>(rows);
      mean[c] = static_cast<Real>(sum[c]);
      inv_std[c] = static_cast<Real>(1.0 / std::sqrt(var + static_cast<double>(state.eps)));
      if (update_running) {
        const Real m = state.momentum;
        const double unbiased = rows > 1 ? sq[c] / static_cast<double>(rows - 1) : var;
        state.running_mean[c] = (1 - m) * state.running_mean[c] + m * mean[c];
        state.running_var[c] = (1 - m) * state.running_var[c] + m * static_cast<Real>(unbiased);
      }
    }
  } else {
    for (std::size_t c = 0; c < C; ++c) {
      mean[c] = state.running_mean[c];
      inv_std[c] = Real(1) / std::sqrt(state.running_var[c] + state.eps);
    }
  }

  Tensor out(xv.shape());
  auto gs = gamma.value().data();
  auto bs = beta.value().data();
  auto o = out.data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t i = r * C + c;
      o[i] = (xs[i] - mean[c]) * inv_std[c] * gs[c] + bs[c];
    }
  }

  const bool batch_stats = mode == Mode::kTrain;
  return x.tape().record(
      std::move(out), {x, gamma, beta},
      [C, rows, batch_stats, mean = std::move(mean), inv_std = std::move(inv_std)](BackwardContext& ctx) {
        auto g = ctx.grad_output();
        auto xs = ctx.input(0).data();
        auto gs = ctx.input(1).data();
        std::vector<Real> sum_g(C, Real(0)), sum_gx(C, Real(0));
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t c = 0; c < C; ++c) {
            const std::size_t i = r * C + c;
            sum_g[c] += g[i];
            sum_gx[c] += g[i] * (xs[i] - mean[c]) * inv_std[c];
          }
        }
        if (ctx.needs_grad(1)) {
          auto dg = ctx.grad_input(1);
          for (std::size_t c = 0; c < C; ++c) dg[c] += sum_gx[c];
        }
        if (ctx.needs_grad(2)) {
          auto db = ctx.grad_input(2);
          for (std::size_t c = 0; c < C; ++c) db[c] += sum_g[c];
        }
        if (ctx.needs_grad(0)) {
          auto dx = ctx.grad_input(0);
          const Real inv_m = Real(1) / static_cast<Real>(rows);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < C; ++c) {
              const std::size_t i = r * C + c;
              if (batch_stats) {
                const Real xhat = (xs[i] - mean[c]) * inv_std[c];
                dx[i] += gs[c] * inv_std[c] * (g[i] - inv_m * sum_g[c] - xhat * inv_m * sum_gx[c]);
              } else {
                dx[i] += gs[c] * inv_std[c] * g[i];
              }
            }
          }
        }
      });
}

Var dropout(Var x, Real rho, Mode mode, std::uint64_t seed) {
  if (!(rho >= 0) || rho >= 1) throw ConfigError("dropout probability must be in [0, 1)");
  if (mode == Mode::kInfer || rho == 0) {
    return x.tape().record(x.value(), {x}, [](BackwardContext& ctx) {
      auto g = ctx.grad_output();
      auto gi = ctx.grad_input(0);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    });
  }
  const Real keep_scale = Real(1) / (Real(1) - rho);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution drop(static_cast<double>(rho));
  std::vector<Real> mask(x.size());
  for (Real& m : mask) m = drop(rng) ? Real(0) : keep_scale;
  Tensor out(x.shape());
  auto xs = x.value().data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = xs[i] * mask[i];
  return x.tape().record(std::move(out), {x}, [mask = std::move(mask)](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    auto gi = ctx.grad_input(0);
    for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * mask[i];
  });
}

Var fully_connected(Var x, Var weights, Var bias) {
  // Copies of the extents: recording new nodes may move earlier node values.
  const Shape w_shape = weights.value().shape();
  if (w_shape.size() != 2) throw ShapeError("fully_connected: weights must be [in x out]");
  if (bias.value().size() != w_shape[1]) throw ShapeError("fully_connected: bias length must equal out");
  const bool vector_input = x.value().rank() == 1;
  Var rows = vector_input ? ops::reshape(x, {1, x.size()}) : x;
  if (rows.value().rank() != 2 || rows.value().extent(1) != w_shape[0]) {
    throw ShapeError("fully_connected: input " + shape_string(x.shape()) + " does not match weights " +
                     shape_string(w_shape));
  }
  Var y = ops::add_row(ops::matmul(rows, weights), bias);
  return vector_input ? ops::reshape(y, {w_shape[1]}) : y;
}

Var conv3d(Var x, Conv3dLayer& layer) {
  Tape& tape = x.tape();
  return conv3d(x, tape.parameter(layer.kernels), tape.parameter(layer.bias), layer.stride);
}

Var maxpool3d(Var x, const MaxPool3dLayer& layer) { return maxpool3d(x, layer.kernel, layer.stride); }

Var prelu(Var x, PReluLayer& layer) { return prelu(x, x.tape().parameter(layer.slopes)); }

Var batchnorm(Var x, BatchNormLayer& layer, Mode mode, bool update_running) {
  Tape& tape = x.tape();
  return batchnorm(x, tape.parameter(layer.gamma), tape.parameter(layer.beta), layer, mode, update_running);
}

Var fully_connected(Var x, LinearLayer& layer) {
  Tape& tape = x.tape();
  return fully_connected(x, tape.parameter(layer.weights), tape.parameter(layer.bias));
}

}  // namespace avsync
