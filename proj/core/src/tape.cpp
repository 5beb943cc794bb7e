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

#include "avsync/tape.hpp"

#include <algorithm>

#include "avsync/errors.hpp"

namespace avsync {

const Tensor& Var::value() const { return tape_->value(*this); }

const Tensor& BackwardContext::output() const { return tape_.nodes_[node_].value(); }

const Tensor& BackwardContext::input(std::size_t i) const {
  return tape_.nodes_[tape_.nodes_[node_].inputs.at(i)].value();
}

bool BackwardContext::needs_grad(std::size_t i) const {
  return tape_.nodes_[tape_.nodes_[node_].inputs.at(i)].requires_grad;
}

std::span<Real> BackwardContext::grad_input(std::size_t i) {
  return tape_.grad_buffer(tape_.nodes_[node_].inputs.at(i));
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  n.leaf = true;
  return push(std::move(n));
}

Var Tape::variable(Tensor value) {
  Node n;
  n.owned = std::move(value);
  n.leaf = true;
  n.requires_grad = recording();
  return push(std::move(n));
}

Var Tape::parameter(Tensor& param) {
  Node n;
  n.external = &param;
  n.leaf = true;
  n.requires_grad = recording() && param.requires_grad();
  return push(std::move(n));
}

Var Tape::record(Tensor value, std::vector<Var> inputs, BackwardRule rule) {
  Node n;
  n.owned = std::move(value);
  n.inputs.reserve(inputs.size());
  for (const Var& v : inputs) {
    if (v.tape_ != this) throw ContractError("op input belongs to a different tape");
    n.inputs.push_back(v.id());
    n.requires_grad = n.requires_grad || nodes_[v.id()].requires_grad;
  }
  n.requires_grad = n.requires_grad && recording();
  if (n.requires_grad) n.rule = std::move(rule);
  return push(std::move(n));
}

const Tensor& Tape::value(Var v) const {
  if (v.tape_ != this) throw ContractError("variable belongs to a different tape");
  return nodes_.at(v.id()).value();
}

std::span<const Real> Tape::grad(Var v) const {
  const Node& n = nodes_.at(v.id());
  if (n.external) return std::as_const(*n.external).grad();
  return n.grad;
}

std::span<Real> Tape::grad_buffer(std::size_t node) {
  Node& n = nodes_[node];
  if (n.external) return n.external->ensure_grad();
  if (n.grad.size() != n.value().size()) n.grad.assign(n.value().size(), Real(0));
  return n.grad;
}

void Tape::backward(Var loss) {
  if (!recording()) throw ContractError("backward() on a tape recorded without gradients");
  if (loss.tape_ != this) throw ContractError("loss belongs to a different tape");
  if (value(loss).size() != 1) {
    throw ContractError("backward() needs a scalar loss, got shape " + shape_string(value(loss).shape()));
  }
  if (!nodes_[loss.id()].requires_grad) return;

  grad_buffer(loss.id())[0] += Real(1);
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.rule || n.grad.empty()) continue;
    // Interior gradients are released once consumed.
    std::vector<Real> upstream = std::move(n.grad);
    n.grad.clear();
    BackwardContext ctx(*this, i, upstream);
    n.rule(ctx);
  }
}

}  // namespace avsync
