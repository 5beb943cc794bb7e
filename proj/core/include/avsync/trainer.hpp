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
#include <functional>
#include <span>
#include <vector>

#include "avsync/folds.hpp"
#include "avsync/metrics.hpp"
#include "avsync/model.hpp"
#include "avsync/optimizer.hpp"
#include "avsync/pairs.hpp"

namespace avsync {

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t max_epochs = 15;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  SelectionConfig selection;
  bool early_stop = true;
  /// Consecutive validation EER increases that end training.
  std::size_t patience = 2;
  /// Also report the inference-mode loss over the whole training set each epoch.
  bool track_full_loss = false;

  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;
  double loss = 0;            // mean over optimizer steps
  double selection_rate = 1;  // pairs trained on / pairs seen
  double val_eer = -1;        // -1 when there is no validation set
  double full_loss = -1;      // -1 unless track_full_loss
  std::size_t steps = 0;
  std::size_t skipped_batches = 0;
};

struct TrainResult {
  std::vector<EpochStats> epochs;
  bool stopped_early = false;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Stacks the cubes of `pairs[indices]` into [N, 9, 60, 100, 1] and [N, 15, 40, 3].
Tensor stack_visual(std::span<const LabeledPair> pairs, std::span<const std::size_t> indices);
Tensor stack_speech(std::span<const LabeledPair> pairs, std::span<const std::size_t> indices);

/// Embedding distances in inference mode, in pair order.
std::vector<ScoredPair> score_pairs(CoupledModel& model, std::span<const LabeledPair> pairs,
                                    std::size_t batch_size = 32);

/// Inference-mode contrastive loss over every pair plus the regularization term.
double dataset_loss(CoupledModel& model, std::span<const LabeledPair> pairs, std::size_t batch_size = 32);

/// Frozen no-grad forward of `batch` (batch statistics, running stats and
/// parameters untouched, no dropout) followed by impostor selection. Returns
/// the kept entries of `batch` in their original order.
std::vector<std::size_t> select_pairs(CoupledModel& model, std::span<const LabeledPair> pairs,
                                      std::span<const std::size_t> batch, const SelectionConfig& selection);

/// True when the trailing run of strict rises in `val_eer` reaches `patience`.
/// Negative entries (unmeasured) break the run.
bool early_stop_triggered(std::span<const double> val_eer, std::size_t patience);

/// One pass over a seeded shuffle (seed + epoch). Per mini-batch: a frozen
/// no-grad forward (batch statistics, no running-stat update, no dropout)
/// gives the distances for impostor selection, then the kept pairs are
/// trained on with one optimizer step. Batches left with fewer than two
/// pairs are skipped.
EpochStats train_epoch(CoupledModel& model, Optimizer& optimizer, std::span<const LabeledPair> pairs,
                       const TrainConfig& config, std::size_t epoch);

/// Up to max_epochs epochs; with early_stop and a validation set, halts once
/// the validation EER has risen `patience` times in a row.
TrainResult train(CoupledModel& model, std::span<const LabeledPair> train_pairs,
                  std::span<const LabeledPair> val_pairs, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

struct GridPoint {
  Real mu = Real(1.0);
  Real lambda = Real(1e-4);
  Real rho = Real(0.5);
  Real eta0 = Real(0.1);
};

struct CrossValResult {
  std::size_t best_index = 0;
  GridPoint best;
  std::vector<std::vector<double>> fold_eer;  // [grid point][fold]
  std::vector<double> mean_eer;
};

/// Validation EER of one grid point on one held-out fold.
using FoldEvaluator = std::function<double(const GridPoint&, std::size_t fold)>;

/// Argmin of the mean fold EER; ties go to the earlier grid point.
CrossValResult cross_validate(std::span<const GridPoint> grid, std::size_t k, const FoldEvaluator& evaluate);

struct CrossValConfig {
  TrainConfig train;
  std::size_t k = 5;
  std::uint64_t fold_seed = 0;
  std::uint64_t model_seed = 0;
};

/// Subject-disjoint k-fold search. Every fold trains a fresh model with
/// online selection disabled and scores the held-out subjects.
CrossValResult cross_validate(std::span<const LabeledPair> pairs, const Architecture& arch,
                              std::span<const GridPoint> grid, const CrossValConfig& config);

/// Stratified split of pair indices into `parts` disjoint groups: each class
/// is shuffled with `seed` and dealt round-robin.
std::vector<std::vector<std::size_t>> split_scored(std::span<const ScoredPair> scores, std::size_t parts,
                                                   std::uint64_t seed);

struct RunReport {
  MetricsReport overall;
  std::vector<double> eer;
  std::vector<double> auc;
  std::vector<double> ap;
  MeanStd eer_stats;
  MeanStd auc_stats;
  MeanStd ap_stats;
};

RunReport evaluate_scores(std::span<const ScoredPair> scores, std::size_t parts = 5, std::uint64_t seed = 0);
RunReport evaluate_run(CoupledModel& model, std::span<const LabeledPair> test_pairs, std::size_t parts = 5,
                       std::uint64_t seed = 0);

/// FNV-1a over every parameter and buffer byte; equal iff bitwise equal (modulo collisions).
std::uint64_t parameter_checksum(CoupledModel& model);

}  // namespace avsync
