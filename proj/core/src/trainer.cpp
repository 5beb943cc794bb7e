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

#include "avsync/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>

#include "avsync/errors.hpp"
#include "avsync/parallel.hpp"
#include "avsync/seed.hpp"

namespace avsync {
namespace {

Tensor stack(std::span<const LabeledPair> pairs, std::span<const std::size_t> indices, bool visual) {
  if (indices.empty()) throw ContractError("cannot stack an empty batch");
  auto cube = [&](std::size_t i) -> const Tensor& { return visual ? *pairs[i].visual : pairs[i].speech; };
  const Tensor& first = cube(indices[0]);
  Shape shape = first.shape();
  shape.insert(shape.begin(), indices.size());
  Tensor out(shape);
  auto dst = out.data();
  const std::size_t per = first.size();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Tensor& c = cube(indices[k]);
    if (c.shape() != first.shape()) throw ShapeError("batch mixes cube shapes " + shape_string(c.shape()));
    std::copy(c.data().begin(), c.data().end(), dst.begin() + static_cast<std::ptrdiff_t>(k * per));
  }
  return out;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

double regularizer_value(CoupledModel& model) {
  double ss = 0;
  for (const auto& p : model.parameters()) {
    if (!p.regularized) continue;
    for (Real w : p.tensor->data()) ss += static_cast<double>(w) * w;
  }
  if (model.config().regularizer == Regularizer::kNorm) return std::sqrt(ss + 1e-12);
  return ss;
}

std::vector<LabeledPair> gather(std::span<const LabeledPair> pairs, std::span<const std::size_t> idx) {
  std::vector<LabeledPair> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(pairs[i]);
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 2) throw ConfigError("batch_size must be >= 2 (batch norm)");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  optimizer.validate();
  selection.validate();
}

Tensor stack_visual(std::span<const LabeledPair> pairs, std::span<const std::size_t> indices) {
  return stack(pairs, indices, true);
}

Tensor stack_speech(std::span<const LabeledPair> pairs, std::span<const std::size_t> indices) {
  return stack(pairs, indices, false);
}

std::vector<ScoredPair> score_pairs(CoupledModel& model, std::span<const LabeledPair> pairs, std::size_t batch_size) {
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  const auto all = iota_indices(pairs.size());
  for (std::size_t b = 0; b < pairs.size(); b += batch_size) {
    std::span<const std::size_t> idx(all.data() + b, std::min(batch_size, pairs.size() - b));
    Tape tape(Tape::Mode::kNoGrad);
    ForwardOptions opts{Mode::kInfer, false, false, 0};
    Var ev = model.embed_visual(tape.constant(stack_visual(pairs, idx)), opts);
    Var ea = model.embed_audio(tape.constant(stack_speech(pairs, idx)), opts);
    const Tensor& d = pair_distance(ev, ea).value();
    for (std::size_t k = 0; k < idx.size(); ++k) out.push_back({d[k], pairs[idx[k]].label});
  }
  return out;
}

double dataset_loss(CoupledModel& model, std::span<const LabeledPair> pairs, std::size_t batch_size) {
  const auto scores = score_pairs(model, pairs, batch_size);
  std::vector<DistanceLabel> dl;
  dl.reserve(scores.size());
  for (const auto& s : scores) dl.push_back({s.distance, s.label});
  return contrastive_loss(dl, model.config().mu, model.config().lambda, static_cast<Real>(regularizer_value(model)));
}

std::vector<std::size_t> select_pairs(CoupledModel& model, std::span<const LabeledPair> pairs,
                                      std::span<const std::size_t> batch, const SelectionConfig& selection) {
  if (batch.size() < 2) throw ContractError("selection needs a batch of at least 2 pairs");
  std::vector<int> labels;
  for (std::size_t i : batch) labels.push_back(pairs[i].label);
  Tape frozen(Tape::Mode::kNoGrad);
  ForwardOptions opts{Mode::kTrain, false, false, 0};
  Var ev = model.embed_visual(frozen.constant(stack_visual(pairs, batch)), opts);
  Var ea = model.embed_audio(frozen.constant(stack_speech(pairs, batch)), opts);
  const Tensor& d = pair_distance(ev, ea).value();
  std::vector<std::size_t> kept;
  for (std::size_t k : select_batch(d.data(), labels, selection)) kept.push_back(batch[k]);
  return kept;
}

bool early_stop_triggered(std::span<const double> val_eer, std::size_t patience) {
  if (patience < 1) throw ConfigError("patience must be >= 1");
  std::size_t rises = 0;
  for (std::size_t i = 1; i < val_eer.size(); ++i) {
    if (val_eer[i] < 0 || val_eer[i - 1] < 0) {
      rises = 0;
      continue;
    }
    rises = val_eer[i] > val_eer[i - 1] ? rises + 1 : 0;
  }
  return rises >= patience;
}

EpochStats train_epoch(CoupledModel& model, Optimizer& optimizer, std::span<const LabeledPair> pairs,
                       const TrainConfig& config, std::size_t epoch) {
  config.validate();
  if (pairs.empty()) throw ContractError("training set is empty");
  EpochStats stats;
  stats.epoch = epoch;
  auto order = iota_indices(pairs.size());
  std::mt19937_64 rng(config.seed + epoch);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<std::size_t>(rng() % (i + 1))]);
  }
  const auto params = model.parameters();
  double loss_sum = 0;
  std::size_t seen = 0, used = 0, batch_no = 0;
  for (std::size_t b = 0; b < order.size(); b += config.batch_size, ++batch_no) {
    std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(b),
                                   order.begin() + static_cast<std::ptrdiff_t>(std::min(b + config.batch_size, order.size())));
    seen += batch.size();
    std::vector<std::size_t> kept = batch;
    if (config.selection.enabled && batch.size() >= 2) kept = select_pairs(model, pairs, batch, config.selection);
    if (kept.size() < 2) {
      ++stats.skipped_batches;
      continue;
    }
    used += kept.size();
    std::vector<int> kept_labels;
    for (std::size_t i : kept) kept_labels.push_back(pairs[i].label);

    Tape tape;
    ForwardOptions opts{Mode::kTrain, true, true, derive_seed(config.seed, (epoch << 32) + batch_no)};
    Var ev = model.embed_visual(tape.constant(stack_visual(pairs, kept)), opts);
    Var ea = model.embed_audio(tape.constant(stack_speech(pairs, kept)), opts);
    Var loss = model.loss(ev, ea, kept_labels);
    model.zero_grad();
    tape.backward(loss);
    optimizer.step(params);
    loss_sum += loss.value()[0];
    ++stats.steps;
  }
  stats.loss = stats.steps ? loss_sum / static_cast<double>(stats.steps) : 0.0;
  stats.selection_rate = seen ? static_cast<double>(used) / static_cast<double>(seen) : 0.0;
  if (config.track_full_loss) stats.full_loss = dataset_loss(model, pairs, config.batch_size);
  return stats;
}

TrainResult train(CoupledModel& model, std::span<const LabeledPair> train_pairs,
                  std::span<const LabeledPair> val_pairs, const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  tune_allocator();
  auto optimizer = make_optimizer(config.optimizer);
  TrainResult result;
  std::vector<double> history;
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    EpochStats stats = train_epoch(model, *optimizer, train_pairs, config, epoch);
    if (!val_pairs.empty()) {
      const auto scores = score_pairs(model, val_pairs, config.batch_size);
      stats.val_eer = compute_eer(scores);
    }
    history.push_back(stats.val_eer);
    result.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
    if (config.early_stop && early_stop_triggered(history, config.patience)) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

CrossValResult cross_validate(std::span<const GridPoint> grid, std::size_t k, const FoldEvaluator& evaluate) {
  if (grid.empty()) throw ConfigError("cross-validation grid is empty");
  if (k < 1) throw ConfigError("cross-validation needs k >= 1");
  CrossValResult r;
  for (const GridPoint& g : grid) {
    std::vector<double> errs;
    for (std::size_t f = 0; f < k; ++f) errs.push_back(evaluate(g, f));
    r.mean_eer.push_back(mean_std(errs).mean);
    r.fold_eer.push_back(std::move(errs));
  }
  r.best_index = static_cast<std::size_t>(std::min_element(r.mean_eer.begin(), r.mean_eer.end()) - r.mean_eer.begin());
  r.best = grid[r.best_index];
  return r;
}

CrossValResult cross_validate(std::span<const LabeledPair> pairs, const Architecture& arch,
                              std::span<const GridPoint> grid, const CrossValConfig& config) {
  std::vector<std::string> subjects;
  for (const auto& p : pairs) subjects.push_back(p.subject_id);
  const FoldPlan plan = split_folds(subjects, config.k, config.fold_seed);
  auto subject_of = [](const LabeledPair& p) -> const std::string& { return p.subject_id; };
  return cross_validate(grid, config.k, [&](const GridPoint& g, std::size_t fold) {
    const auto train_set = gather(pairs, fold_members(plan, pairs, fold, false, subject_of));
    const auto val_set = gather(pairs, fold_members(plan, pairs, fold, true, subject_of));
    ModelConfig mc;
    mc.zeta = arch.embedding;
    mc.mu = g.mu;
    mc.lambda = g.lambda;
    mc.rho = g.rho;
    CoupledModel model(arch, mc, config.model_seed);
    TrainConfig tc = config.train;
    tc.selection.enabled = false;
    tc.selection.eta0 = g.eta0;
    train(model, train_set, val_set, tc);
    return compute_eer(score_pairs(model, val_set, tc.batch_size));
  });
}

std::vector<std::vector<std::size_t>> split_scored(std::span<const ScoredPair> scores, std::size_t parts,
                                                   std::uint64_t seed) {
  if (parts < 1) throw ConfigError("need at least one split");
  if (scores.size() < parts) throw ContractError("fewer scored pairs than splits");
  std::vector<std::vector<std::size_t>> out(parts);
  std::mt19937_64 rng(seed);
  std::size_t dealt = 0;
  for (int label : {1, 0}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].label == label) idx.push_back(i);
    }
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng() % i)]);
    for (std::size_t i : idx) out[dealt++ % parts].push_back(i);
  }
  for (auto& part : out) std::sort(part.begin(), part.end());
  return out;
}

RunReport evaluate_scores(std::span<const ScoredPair> scores, std::size_t parts, std::uint64_t seed) {
  RunReport r;
  r.overall = compute_report(scores);
  for (const auto& part : split_scored(scores, parts, seed)) {
    std::vector<ScoredPair> subset;
    for (std::size_t i : part) subset.push_back(scores[i]);
    const MetricsReport m = compute_report(subset);
    r.eer.push_back(m.eer);
    r.auc.push_back(m.auc);
    r.ap.push_back(m.ap);
  }
  r.eer_stats = mean_std(r.eer);
  r.auc_stats = mean_std(r.auc);
  r.ap_stats = mean_std(r.ap);
  return r;
}

RunReport evaluate_run(CoupledModel& model, std::span<const LabeledPair> test_pairs, std::size_t parts,
                       std::uint64_t seed) {
  const auto scores = score_pairs(model, test_pairs);
  return evaluate_scores(scores, parts, seed);
}

std::uint64_t parameter_checksum(CoupledModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const Tensor& t) {
    for (Real v : t.data()) {
      unsigned char bytes[sizeof(Real)];
      std::memcpy(bytes, &v, sizeof(Real));
      for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
      }
    }
  };
  for (const auto& p : model.parameters()) mix(*p.tensor);
  for (const auto& [name, t] : model.buffers()) mix(*t);
  return h;
}

}  // namespace avsync
