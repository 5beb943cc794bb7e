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
#include <memory>
#include <string>
#include <vector>

#include "avsync/model.hpp"

namespace avsync {

enum class OptimizerKind { kMomentum, kAdam };

OptimizerKind parse_optimizer(const std::string& name);
std::string optimizer_name(OptimizerKind kind);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kMomentum;
  Real learning_rate = Real(1e-3);
  Real momentum = Real(0.9);
  Real beta1 = Real(0.9);
  Real beta2 = Real(0.999);
  Real epsilon = Real(1e-8);

  void validate() const;
};

/// Applies accumulated gradients to a fixed parameter list. Tensors whose
/// gradient slot is empty are left untouched for that step.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(const std::vector<ParameterRef>& params) = 0;
  std::size_t steps() const { return steps_; }

 protected:
  std::size_t steps_ = 0;
};

/// v <- momentum * v + g; w <- w - lr * v.
class MomentumSgd final : public Optimizer {
 public:
  explicit MomentumSgd(const OptimizerConfig& config);
  void step(const std::vector<ParameterRef>& params) override;

 private:
  OptimizerConfig config_;
  std::vector<std::vector<Real>> velocity_;
};

/// Bias-corrected adaptive moments.
class Adam final : public Optimizer {
 public:
  explicit Adam(const OptimizerConfig& config);
  void step(const std::vector<ParameterRef>& params) override;

 private:
  OptimizerConfig config_;
  std::vector<std::vector<Real>> m_;
  std::vector<std::vector<Real>> v_;
};

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config);

}  // namespace avsync
