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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "avsync/errors.hpp"
#include "avsync/trainer.hpp"
#include "fixtures.hpp"

namespace avsync {
namespace {

CoupledModel micro_model(std::uint64_t seed, Real lambda = Real(1e-4)) {
  ModelConfig mc;
  mc.zeta = 3;
  mc.lambda = lambda;
  mc.rho = 0.2;
  return CoupledModel(testing::micro_architecture(), mc, seed);
}

TrainConfig micro_train() {
  TrainConfig tc;
  tc.batch_size = 8;
  tc.max_epochs = 3;
  tc.seed = 4;
  tc.optimizer.kind = OptimizerKind::kAdam;
  tc.optimizer.learning_rate = 0.01;
  return tc;
}

TEST(Stack, ConcatenatesCubesInIndexOrder) {
  const auto pairs = testing::micro_pairs(2, 2, 1);
  const std::vector<std::size_t> idx{3, 0};
  const Tensor v = stack_visual(pairs, idx), s = stack_speech(pairs, idx);
  EXPECT_EQ(v.shape(), (Shape{2, 4, 9, 9, 1}));
  EXPECT_EQ(s.shape(), (Shape{2, 4, 6, 3, 1}));
  EXPECT_TRUE(std::equal(pairs[3].visual->data().begin(), pairs[3].visual->data().end(), v.data().begin()));
  EXPECT_TRUE(std::equal(pairs[0].speech.data().begin(), pairs[0].speech.data().end(), s.data().begin() + 72));
  EXPECT_THROW(stack_visual(pairs, std::vector<std::size_t>{}), ContractError);
  auto mixed = pairs;
  mixed[1].speech = Tensor({4, 6, 2, 1});
  EXPECT_THROW(stack_speech(mixed, std::vector<std::size_t>{0, 1}), ShapeError);
}

TEST(ScorePairs, IndependentOfBatchingAndMatchesSingleForward) {
  auto model = micro_model(2);
  const auto pairs = testing::micro_pairs(2, 3, 2);
  const auto a = score_pairs(model, pairs, 32), b = score_pairs(model, pairs, 1), c = score_pairs(model, pairs, 5);
  ASSERT_EQ(a.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_NEAR(a[i].distance, b[i].distance, 1e-12);
    EXPECT_NEAR(a[i].distance, c[i].distance, 1e-12);
    EXPECT_EQ(a[i].label, pairs[i].label);
    const auto ev = model.visual_forward(*pairs[i].visual);
    const auto ea = model.audio_forward(pairs[i].speech);
    EXPECT_NEAR(a[i].distance, pair_distance(ev, ea), 1e-12);
  }
}

TEST(DatasetLoss, EqualsContrastiveLossOfScores) {
  auto model = micro_model(3, 0.01);
  const auto pairs = testing::micro_pairs(2, 3, 3);
  std::vector<DistanceLabel> dl;
  for (const auto& s : score_pairs(model, pairs)) dl.push_back({s.distance, s.label});
  Tape tape(Tape::Mode::kNoGrad);
  const Real reg = model.regularization(tape).value()[0] / Real(0.01);
  EXPECT_NEAR(dataset_loss(model, pairs), contrastive_loss(dl, 1.0, 0.01, reg), 1e-12);
}

TEST(SelectPairs, FrozenPassLeavesModelUntouched) {
  auto model = micro_model(5);
  const auto pairs = testing::micro_pairs(3, 4, 5);
  std::vector<std::size_t> batch(pairs.size());
  std::iota(batch.begin(), batch.end(), std::size_t{0});
  std::reverse(batch.begin(), batch.end());
  const auto before = parameter_checksum(model);
  SelectionConfig sel;
  sel.eta0 = 0.01;
  const auto kept = select_pairs(model, pairs, batch, sel);
  EXPECT_EQ(parameter_checksum(model), before);
  // Kept entries keep batch order and include every genuine pair.
  std::size_t genuine = 0;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (k > 0) EXPECT_LT(std::find(batch.begin(), batch.end(), kept[k - 1]), std::find(batch.begin(), batch.end(), kept[k]));
    genuine += pairs[kept[k]].label;
  }
  EXPECT_EQ(genuine, pairs.size() / 2);
  // Same frozen forward computed directly.
  Tape tape(Tape::Mode::kNoGrad);
  ForwardOptions opts{Mode::kTrain, false, false, 0};
  Var ev = model.embed_visual(tape.constant(stack_visual(pairs, batch)), opts);
  Var ea = model.embed_audio(tape.constant(stack_speech(pairs, batch)), opts);
  const Tensor d = pair_distance(ev, ea).value();
  std::vector<int> labels;
  for (std::size_t i : batch) labels.push_back(pairs[i].label);
  std::vector<std::size_t> want;
  for (std::size_t k : select_batch(d.data(), labels, sel)) want.push_back(batch[k]);
  EXPECT_EQ(kept, want);
  EXPECT_THROW(select_pairs(model, pairs, std::vector<std::size_t>{0}, sel), ContractError);
}

TEST(EarlyStop, TrailingStrictRises) {
  using V = std::vector<double>;
  EXPECT_FALSE(early_stop_triggered(V{}, 2));
  EXPECT_FALSE(early_stop_triggered(V{0.3, 0.4}, 2));
  EXPECT_TRUE(early_stop_triggered(V{0.3, 0.4}, 1));
  EXPECT_TRUE(early_stop_triggered(V{0.5, 0.3, 0.4, 0.45}, 2));
  EXPECT_FALSE(early_stop_triggered(V{0.3, 0.4, 0.4, 0.45}, 2));
  EXPECT_FALSE(early_stop_triggered(V{0.3, 0.4, 0.5, 0.2}, 2));
  EXPECT_FALSE(early_stop_triggered(V{-1, -1, -1}, 1));
  EXPECT_FALSE(early_stop_triggered(V{0.1, 0.2, -1, 0.3}, 2));
  EXPECT_THROW(early_stop_triggered(V{0.1}, 0), ConfigError);
}

TEST(TrainEpoch, StepsSelectionAndDeterminism) {
  const auto pairs = testing::micro_pairs(4, 5, 6);
  TrainConfig tc = micro_train();
  tc.selection.enabled = false;
  auto a = micro_model(7), b = micro_model(7);
  auto oa = make_optimizer(tc.optimizer), ob = make_optimizer(tc.optimizer);
  const EpochStats sa = train_epoch(a, *oa, pairs, tc, 0);
  const EpochStats sb = train_epoch(b, *ob, pairs, tc, 0);
  EXPECT_EQ(sa.steps, 5u);
  EXPECT_EQ(sa.skipped_batches, 0u);
  EXPECT_EQ(sa.selection_rate, 1.0);
  EXPECT_EQ(sa.loss, sb.loss);
  EXPECT_EQ(parameter_checksum(a), parameter_checksum(b));
  EXPECT_EQ(oa->steps(), 5u);

  TrainConfig sel = tc;
  sel.selection.enabled = true;
  sel.selection.eta0 = 1e-3;
  auto c = micro_model(7);
  auto oc = make_optimizer(sel.optimizer);
  const EpochStats sc = train_epoch(c, *oc, pairs, sel, 0);
  EXPECT_LE(sc.selection_rate, 1.0);
  EXPECT_GE(sc.selection_rate, 0.5 - 1e-12);
  EXPECT_EQ(sc.steps + sc.skipped_batches, 5u);

  EXPECT_THROW(train_epoch(c, *oc, std::vector<LabeledPair>{}, tc, 0), ContractError);
}

TEST(Train, LearnsTheMicroTask) {
  const auto train_pairs = testing::micro_pairs(8, 16, 8);
  const auto val_pairs = testing::micro_pairs(4, 8, 9);
  auto model = micro_model(10);
  TrainConfig tc = micro_train();
  tc.max_epochs = 12;
  tc.optimizer.learning_rate = 0.003;
  tc.early_stop = false;
  tc.track_full_loss = true;
  const double eer0 = compute_eer(score_pairs(model, val_pairs));
  std::size_t calls = 0;
  const TrainResult r = train(model, train_pairs, val_pairs, tc, [&](const EpochStats& s) {
    EXPECT_EQ(s.epoch, calls);
    ++calls;
  });
  EXPECT_EQ(calls, 12u);
  EXPECT_FALSE(r.stopped_early);
  EXPECT_LT(r.epochs.back().full_loss, 0.75 * r.epochs.front().full_loss);
  double best = 1;
  for (const auto& e : r.epochs) best = std::min(best, e.val_eer);
  EXPECT_LT(best, 0.4);
  EXPECT_LT(best, eer0);
}

TEST(Train, EarlyStopAndMissingValidation) {
  const auto pairs = testing::micro_pairs(2, 4, 11);
  TrainConfig tc = micro_train();
  tc.max_epochs = 4;
  auto model = micro_model(1);
  const TrainResult r = train(model, pairs, {}, tc);
  EXPECT_EQ(r.epochs.size(), 4u);
  for (const auto& e : r.epochs) EXPECT_EQ(e.val_eer, -1);
  EXPECT_EQ(r.epochs[0].full_loss, -1);

  // Validation on a set whose labels fight the training signal.
  auto flipped = testing::micro_pairs(2, 6, 12);
  for (auto& p : flipped) p.label = 1 - p.label;
  tc.max_epochs = 15;
  tc.patience = 1;
  auto m2 = micro_model(1);
  const TrainResult r2 = train(m2, testing::micro_pairs(4, 6, 13), flipped, tc);
  ASSERT_TRUE(r2.stopped_early);
  const auto& e = r2.epochs;
  EXPECT_GT(e[e.size() - 1].val_eer, e[e.size() - 2].val_eer);
}

TEST(TrainConfig, Validation) {
  auto model = micro_model(1);
  const auto pairs = testing::micro_pairs(1, 2, 1);
  auto bad = [](auto mutate) {
    TrainConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(train(model, pairs, {}, bad([](TrainConfig& c) { c.batch_size = 1; })), ConfigError);
  EXPECT_THROW(train(model, pairs, {}, bad([](TrainConfig& c) { c.max_epochs = 0; })), ConfigError);
  EXPECT_THROW(train(model, pairs, {}, bad([](TrainConfig& c) { c.patience = 0; })), ConfigError);
  EXPECT_THROW(train(model, pairs, {}, bad([](TrainConfig& c) { c.selection.eta0 = 0; })), ConfigError);
}

TEST(CrossValidate, PicksLowestMeanEarliestOnTies) {
  const std::vector<GridPoint> grid{{1.0, 1e-4, 0.5, 0.1}, {0.5, 1e-4, 0.5, 0.1}, {2.0, 1e-4, 0.5, 0.1}};
  const auto r = cross_validate(grid, 3, [](const GridPoint& g, std::size_t fold) {
    return g.mu == 2.0 ? 0.1 : 0.2 + 0.01 * static_cast<double>(fold);
  });
  EXPECT_EQ(r.best_index, 2u);
  EXPECT_EQ(r.fold_eer.size(), 3u);
  EXPECT_EQ(r.fold_eer[0].size(), 3u);
  EXPECT_NEAR(r.mean_eer[0], 0.21, 1e-12);
  const auto tie = cross_validate(grid, 2, [](const GridPoint&, std::size_t) { return 0.3; });
  EXPECT_EQ(tie.best_index, 0u);
  EXPECT_THROW(cross_validate(std::vector<GridPoint>{}, 2, [](const GridPoint&, std::size_t) { return 0.0; }),
               ConfigError);
}

TEST(CrossValidate, HeldOutFoldsAreSubjectDisjoint) {
  const auto pairs = testing::micro_pairs(6, 2, 14);
  CrossValConfig cv;
  cv.k = 3;
  cv.train = micro_train();
  cv.train.max_epochs = 1;
  const std::vector<GridPoint> grid{GridPoint{}, GridPoint{0.5, 1e-4, 0.2, 0.1}};
  const auto r = cross_validate(pairs, testing::micro_architecture(), grid, cv);
  ASSERT_EQ(r.fold_eer.size(), 2u);
  for (const auto& row : r.fold_eer) {
    ASSERT_EQ(row.size(), 3u);
    for (double e : row) {
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, 1.0);
    }
  }
  EXPECT_EQ(cross_validate(pairs, testing::micro_architecture(), grid, cv).mean_eer, r.mean_eer);
}

TEST(SplitScored, StratifiedPartition) {
  std::vector<ScoredPair> scores;
  for (int i = 0; i < 53; ++i) scores.push_back({static_cast<Real>(i), i % 3 == 0 ? 1 : 0});
  const auto parts = split_scored(scores, 5, 2);
  std::set<std::size_t> seen;
  for (const auto& part : parts) {
    std::size_t gen = 0;
    for (std::size_t i : part) {
      EXPECT_TRUE(seen.insert(i).second);
      gen += scores[i].label;
    }
    EXPECT_TRUE(std::is_sorted(part.begin(), part.end()));
    EXPECT_GE(gen, 3u);
    EXPECT_LE(gen, 4u);
  }
  EXPECT_EQ(seen.size(), scores.size());
  EXPECT_THROW(split_scored(scores, 0, 1), ConfigError);
  EXPECT_THROW(split_scored(std::vector<ScoredPair>(3), 5, 1), ContractError);
}

TEST(EvaluateScores, FoldStatisticsSummarizeParts) {
  std::vector<ScoredPair> scores;
  for (int i = 0; i < 100; ++i) scores.push_back({static_cast<Real>((i * 37) % 100) / 100, i % 2});
  const RunReport r = evaluate_scores(scores, 5, 3);
  ASSERT_EQ(r.eer.size(), 5u);
  EXPECT_NEAR(r.eer_stats.mean, std::accumulate(r.eer.begin(), r.eer.end(), 0.0) / 5, 1e-12);
  EXPECT_NEAR(r.overall.auc, compute_auc(scores), 1e-15);
}

TEST(ParameterChecksum, TracksEveryByte) {
  auto a = micro_model(1), b = micro_model(1);
  EXPECT_EQ(parameter_checksum(a), parameter_checksum(b));
  auto& t = *a.parameters()[0].tensor;
  t[0] = std::nextafter(t[0], Real(10));
  EXPECT_NE(parameter_checksum(a), parameter_checksum(b));
  auto& buf = *b.buffers()[0].second;
  buf[0] += 1;
  auto fresh = micro_model(1);
  EXPECT_NE(parameter_checksum(b), parameter_checksum(fresh));
}

}  // namespace
}  // namespace avsync
