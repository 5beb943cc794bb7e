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

#include "avsync/tape.hpp"

// Differentiable primitives shared by the layers and the loss. Broadcasting is
// limited to scalar operands and the explicit row-vector add used for biases.
namespace avsync::ops {

enum class ElementwiseKind { kAdd, kSub, kMul };

Var elementwise(ElementwiseKind kind, Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, Real factor);
Var add_scalar(Var a, Real value);
/// max(a, value) per element; the gradient at a tie goes to `a`.
Var max_scalar(Var a, Real value);

/// [M x K] . [K x N] -> [M x N]. Rank-2 operands only.
Var matmul(Var a, Var b);
/// Adds `row` (shape [N]) to every row of `a` (shape [M x N]).
Var add_row(Var a, Var row);

Var sum(Var a);
Var mean(Var a);
Var sum_squares(Var a);
/// sqrt(sum(a^2) + eps); eps keeps the gradient finite at zero.
Var l2_norm(Var a, Real eps = Real(1e-12));
Var reshape(Var a, Shape shape);

}  // namespace avsync::ops
