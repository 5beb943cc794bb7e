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

#include "avsync/optimizer.hpp"

#include <cmath>

#include "avsync/errors.hpp"

namespace avsync {
namespace {

void match_slots(std::vector<std::vector<Real>>& slots, const std::vector<ParameterRef>& params) {
  if (slots.empty()) {
    for (const auto& p : params) slots.emplace_back(p.tensor->size(), Real(0));
  }
  if (slots.size() != params.size()) throw ContractError("optimizer parameter list changed between steps");
}

}  // namespace

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "momentum" || name == "sgd") return OptimizerKind::kMomentum;
  if (name == "adam") return OptimizerKind::kAdam;
  throw ConfigError("unknown optimizer '" + name + "' (expected momentum or adam)");
}

std::string optimizer_name(OptimizerKind kind) { return kind == OptimizerKind::kAdam ? "adam" : "momentum"; }

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0)) throw ConfigError("learning rate must be > 0");
  if (!(momentum >= 0) || momentum >= 1) throw ConfigError("momentum must be in [0, 1)");
  if (!(beta1 >= 0) || beta1 >= 1 || !(beta2 >= 0) || beta2 >= 1) throw ConfigError("Adam betas must be in [0, 1)");
  if (!(epsilon > 0)) throw ConfigError("Adam epsilon must be > 0");
}

MomentumSgd::MomentumSgd(const OptimizerConfig& config) : config_(config) { config_.validate(); }

void MomentumSgd::step(const std::vector<ParameterRef>& params) {
  match_slots(velocity_, params);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& w = *params[k].tensor;
    if (!w.has_grad()) continue;
    auto g = w.grad();
    auto data = w.data();
    auto& v = velocity_[k];
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = config_.momentum * v[i] + g[i];
      data[i] -= config_.learning_rate * v[i];
    }
  }
  ++steps_;
}

Adam::Adam(const OptimizerConfig& config) : config_(config) { config_.validate(); }

void Adam::step(const std::vector<ParameterRef>& params) {
  match_slots(m_, params);
  match_slots(v_, params);
  ++steps_;
  const Real t = static_cast<Real>(steps_);
  const Real c1 = 1 - std::pow(config_.beta1, t);
  const Real c2 = 1 - std::pow(config_.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& w = *params[k].tensor;
    if (!w.has_grad()) continue;
    auto g = w.grad();
    auto data = w.data();
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < m.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1 - config_.beta2) * g[i] * g[i];
      data[i] -= config_.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.epsilon);
    }
  }
}

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config) {
  if (config.kind == OptimizerKind::kAdam) return std::make_unique<Adam>(config);
  return std::make_unique<MomentumSgd>(config);
}

}  // namespace avsync
