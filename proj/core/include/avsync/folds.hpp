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
#include <map>
#include <span>
#include <string>
#include <vector>

namespace avsync {

/// Subject-disjoint partition into k folds.
struct FoldPlan {
  std::size_t k = 5;
  std::map<std::string, std::size_t> assignment;
  std::vector<std::vector<std::string>> folds;

  std::size_t fold_of(const std::string& subject) const;
};

/// Deduplicates, sorts and seeds a shuffle of the subjects, then deals them
/// round-robin, so fold sizes differ by at most one and the first folds take
/// the remainder. Throws ConfigError when k < 2 or there are fewer than k subjects.
FoldPlan split_folds(std::span<const std::string> subjects, std::size_t k = 5, std::uint64_t seed = 0);

/// Indices into `items` whose subject lies in (or outside) fold `fold`.
template <typename T, typename SubjectOf>
std::vector<std::size_t> fold_members(const FoldPlan& plan, std::span<const T> items, std::size_t fold,
                                      bool inside, SubjectOf subject_of) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if ((plan.fold_of(subject_of(items[i])) == fold) == inside) out.push_back(i);
  }
  return out;
}

}  // namespace avsync
