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

#include "avsync/folds.hpp"

#include <algorithm>
#include <random>

#include "avsync/errors.hpp"

namespace avsync {

std::size_t FoldPlan::fold_of(const std::string& subject) const {
  auto it = assignment.find(subject);
  if (it == assignment.end()) throw ContractError("subject '" + subject + "' is not in the fold plan");
  return it->second;
}

FoldPlan split_folds(std::span<const std::string> subjects, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold split needs k >= 2");
  std::vector<std::string> unique(subjects.begin(), subjects.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() < k) {
    throw ConfigError("k-fold split needs at least " + std::to_string(k) + " subjects, got " +
                      std::to_string(unique.size()));
  }
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit draw keeps the order independent of the
  // standard library's shuffle implementation.
  for (std::size_t i = unique.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(unique[i], unique[j]);
  }
  FoldPlan plan;
  plan.k = k;
  plan.folds.resize(k);
  for (std::size_t i = 0; i < unique.size(); ++i) {
    plan.folds[i % k].push_back(unique[i]);
    plan.assignment[unique[i]] = i % k;
  }
  return plan;
}

}  // namespace avsync
