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
#include <functional>
#include <span>
#include <vector>

#include "avsync/tensor.hpp"

namespace avsync {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t size() const { return value().size(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// View handed to a backward rule: the upstream gradient of the node being
/// processed and accumulation buffers for each of its inputs.
class BackwardContext {
 public:
  std::span<const Real> grad_output() const { return grad_output_; }
  const Tensor& output() const;
  const Tensor& input(std::size_t i) const;
  bool needs_grad(std::size_t i) const;
  /// Accumulation buffer for input i. Rules must add, never overwrite.
  std::span<Real> grad_input(std::size_t i);

 private:
  friend class Tape;
  BackwardContext(Tape& tape, std::size_t node, std::span<const Real> grad_output)
      : tape_(tape), node_(node), grad_output_(grad_output) {}

  Tape& tape_;
  std::size_t node_;
  std::span<const Real> grad_output_;
};

using BackwardRule = std::function<void(BackwardContext&)>;

/// Define-by-run reverse-mode tape.
///
/// Nodes are appended in evaluation order, so every node's inputs precede it.
/// A tape belongs to one thread and is discarded after its backward pass.
/// In kNoGrad mode values are still recorded but no backward rules are kept.
class Tape {
 public:
  enum class Mode { kRecord, kNoGrad };

  explicit Tape(Mode mode = Mode::kRecord) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return mode_ == Mode::kRecord; }

  /// Leaf that never receives a gradient.
  Var constant(Tensor value);
  /// Leaf owned by the tape whose gradient is retained after backward().
  Var variable(Tensor value);
  /// Leaf aliasing an external tensor. When `param.requires_grad()` is set,
  /// backward() accumulates into `param.grad()`. The tensor must outlive the tape.
  Var parameter(Tensor& param);

  /// Appends an op result. The rule is dropped when no input requires grad.
  Var record(Tensor value, std::vector<Var> inputs, BackwardRule rule);

  const Tensor& value(Var v) const;
  bool requires_grad(Var v) const { return nodes_.at(v.id()).requires_grad; }
  /// Gradient of a tape-owned variable after backward(); empty if none reached it.
  std::span<const Real> grad(Var v) const;

  /// Propagates d(loss)/d(node) to every reachable leaf that requires grad.
  /// Throws ContractError if `loss` is not a single element.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<std::size_t>& inputs_of(std::size_t node) const { return nodes_.at(node).inputs; }

 private:
  friend class BackwardContext;

  struct Node {
    Tensor owned;
    Tensor* external = nullptr;
    std::vector<std::size_t> inputs;
    BackwardRule rule;
    bool requires_grad = false;
    bool leaf = false;
    std::vector<Real> grad;

    const Tensor& value() const { return external ? *external : owned; }
  };

  Var push(Node node);
  std::span<Real> grad_buffer(std::size_t node);

  Mode mode_;
  std::vector<Node> nodes_;
};

}  // namespace avsync
