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

#include <gtest/gtest.h>

#include "avsync/errors.hpp"
#include "avsync/folds.hpp"
#include "fold_laws.hpp"

namespace avsync {
namespace {

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("S" + std::to_string(i));
  return out;
}

TEST(SplitFolds, OneSubjectPerFoldWhenForced) {
  const auto subjects = names(5);
  const FoldPlan plan = split_folds(subjects, 5, 3);
  for (const auto& fold : plan.folds) EXPECT_EQ(fold.size(), 1u);
  EXPECT_EQ(testing::fold_law_violation(plan, subjects, 5), "");
}

TEST(SplitFolds, BalanceRule) {
  const FoldPlan plan = split_folds(names(12), 5, 0);
  std::vector<std::size_t> sizes;
  for (const auto& f : plan.folds) sizes.push_back(f.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 3, 2, 2, 2}));
}

TEST(SplitFolds, SeedChangesTheAssignment) {
  const auto subjects = names(20);
  EXPECT_NE(split_folds(subjects, 4, 1).assignment, split_folds(subjects, 4, 2).assignment);
}

TEST(SplitFolds, Errors) {
  EXPECT_THROW(split_folds(names(4), 5, 0), ConfigError);
  EXPECT_THROW(split_folds(names(4), 1, 0), ConfigError);
  const std::vector<std::string> dup{"a", "a", "b", "b", "c"};
  EXPECT_THROW(split_folds(dup, 4, 0), ConfigError);
  EXPECT_THROW(split_folds(names(6), 3, 0).fold_of("zz"), ContractError);
}

TEST(SplitFolds, PartitionLawsOnRandomSubjectSets) {
  const auto run = testing::run_fold_laws(1000, 42);
  EXPECT_EQ(run.sets, 1000u);
  EXPECT_EQ(run.violations, 0u) << run.first_violation;
}

TEST(FoldMembers, InsideAndOutsideSplitTheItems) {
  const std::vector<std::string> items{"S0", "S1", "S2", "S0", "S3", "S1"};
  const FoldPlan plan = split_folds(items, 2, 7);
  auto id = [](const std::string& s) -> const std::string& { return s; };
  for (std::size_t f = 0; f < 2; ++f) {
    const auto in = fold_members(plan, std::span<const std::string>(items), f, true, id);
    const auto out = fold_members(plan, std::span<const std::string>(items), f, false, id);
    EXPECT_EQ(in.size() + out.size(), items.size());
    for (std::size_t i : in) EXPECT_EQ(plan.fold_of(items[i]), f);
    for (std::size_t i : out) EXPECT_NE(plan.fold_of(items[i]), f);
  }
}

}  // namespace
}  // namespace avsync
