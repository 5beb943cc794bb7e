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

#include "avsync/ops.hpp"

#include <Eigen/Core>
#include <cmath>
#include <numeric>

#include "avsync/errors.hpp"

namespace avsync::ops {
namespace {

using RowMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using Map = Eigen::Map<RowMatrix>;

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  }
}

}  // namespace

Var elementwise(ElementwiseKind kind, Var a, Var b) {
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  require_same_shape(x, y, "elementwise");
  Tensor out(x.shape());
  auto o = out.data();
  auto xs = x.data();
  auto ys = y.data();
  switch (kind) {
    case ElementwiseKind::kAdd:
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = xs[i] + ys[i];
      break;
    case ElementwiseKind::kSub:
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = xs[i] - ys[i];
      break;
    case ElementwiseKind::kMul:
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = xs[i] * ys[i];
      break;
  }
  return a.tape().record(std::move(out), {a, b}, [kind](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    for (std::size_t k = 0; k < 2; ++k) {
      if (!ctx.needs_grad(k)) continue;
      auto gi = ctx.grad_input(k);
      if (kind == ElementwiseKind::kMul) {
        auto other = ctx.input(1 - k).data();
        for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += g[i] * other[i];
      } else {
        const Real sign = (kind == ElementwiseKind::kSub && k == 1) ? Real(-1) : Real(1);
        for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += sign * g[i];
      }
    }
  });
}

Var add(Var a, Var b) { return elementwise(ElementwiseKind::kAdd, a, b); }
Var sub(Var a, Var b) { return elementwise(ElementwiseKind::kSub, a, b); }
Var mul(Var a, Var b) { return elementwise(ElementwiseKind::kMul, a, b); }

Var scale(Var a, Real factor) {
  Tensor out(a.shape());
  auto x = a.value().data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * factor;
  return a.tape().record(std::move(out), {a}, [factor](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    auto gi = ctx.grad_input(0);
    for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += factor * g[i];
  });
}

Var add_scalar(Var a, Real value) {
  Tensor out(a.shape());
  auto x = a.value().data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] + value;
  return a.tape().record(std::move(out), {a}, [](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    auto gi = ctx.grad_input(0);
    for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += g[i];
  });
}

Var max_scalar(Var a, Real value) {
  Tensor out(a.shape());
  auto x = a.value().data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] >= value ? x[i] : value;
  return a.tape().record(std::move(out), {a}, [value](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    auto x = ctx.input(0).data();
    auto gi = ctx.grad_input(0);
    for (std::size_t i = 0; i < gi.size(); ++i) {
      if (x[i] >= value) gi[i] += g[i];
    }
  });
}

Var matmul(Var a, Var b) {
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  if (x.rank() != 2 || y.rank() != 2) throw ShapeError("matmul: operands must be rank 2");
  const auto m = static_cast<Eigen::Index>(x.extent(0));
  const auto k = static_cast<Eigen::Index>(x.extent(1));
  const auto n = static_cast<Eigen::Index>(y.extent(1));
  if (static_cast<Eigen::Index>(y.extent(0)) != k) {
    throw ShapeError("matmul: inner extents differ, " + shape_string(x.shape()) + " . " +
                     shape_string(y.shape()));
  }
  Tensor out({x.extent(0), y.extent(1)});
  Map(out.data().data(), m, n).noalias() = ConstMap(x.data().data(), m, k) * ConstMap(y.data().data(), k, n);
  return a.tape().record(std::move(out), {a, b}, [m, k, n](BackwardContext& ctx) {
    ConstMap g(ctx.grad_output().data(), m, n);
    if (ctx.needs_grad(0)) {
      Map ga(ctx.grad_input(0).data(), m, k);
      ga.noalias() += g * ConstMap(ctx.input(1).data().data(), k, n).transpose();
    }
    if (ctx.needs_grad(1)) {
      Map gb(ctx.grad_input(1).data(), k, n);
      gb.noalias() += ConstMap(ctx.input(0).data().data(), m, k).transpose() * g;
    }
  });
}

Var add_row(Var a, Var row) {
  const Tensor& x = a.value();
  const Tensor& r = row.value();
  if (x.rank() != 2 || r.size() != x.extent(1)) {
    throw ShapeError("add_row: cannot add " + shape_string(r.shape()) + " to rows of " + shape_string(x.shape()));
  }
  const std::size_t rows = x.extent(0);
  const std::size_t cols = x.extent(1);
  Tensor out(x.shape());
  auto xs = x.data();
  auto rs = r.data();
  auto o = out.data();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) o[i * cols + j] = xs[i * cols + j] + rs[j];
  }
  return a.tape().record(std::move(out), {a, row}, [rows, cols](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    if (ctx.needs_grad(0)) {
      auto ga = ctx.grad_input(0);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (ctx.needs_grad(1)) {
      auto gr = ctx.grad_input(1);
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) gr[j] += g[i * cols + j];
      }
    }
  });
}

Var sum(Var a) {
  auto x = a.value().data();
  Tensor out({1}, std::accumulate(x.begin(), x.end(), Real(0)));
  return a.tape().record(std::move(out), {a}, [](BackwardContext& ctx) {
    const Real g = ctx.grad_output()[0];
    for (Real& v : ctx.grad_input(0)) v += g;
  });
}

Var mean(Var a) { return scale(sum(a), Real(1) / static_cast<Real>(a.size())); }

Var sum_squares(Var a) {
  Real acc = 0;
  for (Real v : a.value().data()) acc += v * v;
  return a.tape().record(Tensor({1}, acc), {a}, [](BackwardContext& ctx) {
    const Real g = ctx.grad_output()[0];
    auto x = ctx.input(0).data();
    auto gi = ctx.grad_input(0);
    for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += 2 * g * x[i];
  });
}

Var l2_norm(Var a, Real eps) {
  Real acc = 0;
  for (Real v : a.value().data()) acc += v * v;
  const Real norm = std::sqrt(acc + eps);
  return a.tape().record(Tensor({1}, norm), {a}, [](BackwardContext& ctx) {
    const Real g = ctx.grad_output()[0] / ctx.output()[0];
    auto x = ctx.input(0).data();
    auto gi = ctx.grad_input(0);
    for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += g * x[i];
  });
}

Var reshape(Var a, Shape shape) {
  Tensor out = a.value().reshaped(std::move(shape));
  return a.tape().record(std::move(out), {a}, [](BackwardContext& ctx) {
    auto g = ctx.grad_output();
    auto gi = ctx.grad_input(0);
    for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += g[i];
  });
}

}  // namespace avsync::ops
