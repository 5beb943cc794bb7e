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

#include "avsync/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "avsync/errors.hpp"

namespace avsync {
namespace {

struct Counts {
  std::size_t gen = 0;
  std::size_t imp = 0;
};

Counts class_counts(std::span<const ScoredPair> pairs) {
  Counts c;
  for (const auto& p : pairs) {
    if (!std::isfinite(static_cast<double>(p.distance))) throw ContractError("scored pair with a non-finite distance");
    (p.label == 1 ? c.gen : c.imp)++;
  }
  if (c.gen == 0 || c.imp == 0) throw ContractError("metrics need at least one genuine and one impostor pair");
  return c;
}

// Cumulative (threshold, TP, FA) after each unique distance, ascending.
struct Step {
  Real threshold;
  std::size_t tp;
  std::size_t fa;
};

std::vector<Step> sweep(std::span<const ScoredPair> pairs) {
  std::vector<ScoredPair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(), [](const ScoredPair& a, const ScoredPair& b) { return a.distance < b.distance; });
  std::vector<Step> steps;
  std::size_t tp = 0, fa = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    (sorted[i].label == 1 ? tp : fa)++;
    if (i + 1 == sorted.size() || sorted[i + 1].distance != sorted[i].distance) {
      steps.push_back({sorted[i].distance, tp, fa});
    }
  }
  return steps;
}

}  // namespace

bool verify(Real distance, Real tau) {
  if (!(tau >= 0)) throw ConfigError("verification threshold must be >= 0");
  return distance <= tau;
}

Rates rates_at(std::span<const ScoredPair> pairs, Real tau) {
  const Counts c = class_counts(pairs);
  std::size_t tp = 0, fa = 0;
  for (const auto& p : pairs) {
    if (p.distance <= tau) (p.label == 1 ? tp : fa)++;
  }
  Rates r;
  r.tpr = static_cast<double>(tp) / c.gen;
  r.far = static_cast<double>(fa) / c.imp;
  r.recall = r.tpr;
  r.precision = tp + fa == 0 ? 1.0 : static_cast<double>(tp) / (tp + fa);
  return r;
}

std::vector<RocPoint> roc_curve(std::span<const ScoredPair> pairs) {
  const Counts c = class_counts(pairs);
  std::vector<RocPoint> roc{{-std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  for (const Step& s : sweep(pairs)) {
    roc.push_back({static_cast<double>(s.threshold), static_cast<double>(s.fa) / c.imp,
                   static_cast<double>(s.tp) / c.gen});
  }
  return roc;
}

std::vector<PrPoint> pr_curve(std::span<const ScoredPair> pairs) {
  const Counts c = class_counts(pairs);
  std::vector<PrPoint> pr{{-std::numeric_limits<double>::infinity(), 0.0, 1.0}};
  for (const Step& s : sweep(pairs)) {
    const double precision = s.tp + s.fa == 0 ? 1.0 : static_cast<double>(s.tp) / (s.tp + s.fa);
    pr.push_back({static_cast<double>(s.threshold), static_cast<double>(s.tp) / c.gen, precision});
  }
  return pr;
}

double trapezoid_auc(std::span<const RocPoint> roc) {
  double area = 0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    area += (roc[i].far - roc[i - 1].far) * (roc[i].tpr + roc[i - 1].tpr) / 2;
  }
  return area;
}

double compute_eer(std::span<const ScoredPair> pairs) {
  const auto roc = roc_curve(pairs);
  // f = FAR - FRR rises from -1 to +1 along the curve.
  auto f = [](const RocPoint& p) { return p.far - (1 - p.tpr); };
  for (std::size_t i = 1; i < roc.size(); ++i) {
    const double hi = f(roc[i]);
    if (hi < 0) continue;
    const double lo = f(roc[i - 1]);
    const double t = hi == lo ? 0.0 : -lo / (hi - lo);
    return roc[i - 1].far + t * (roc[i].far - roc[i - 1].far);
  }
  return roc.back().far;
}

double compute_auc(std::span<const ScoredPair> pairs) {
  const auto roc = roc_curve(pairs);
  return trapezoid_auc(roc);
}

double compute_ap(std::span<const ScoredPair> pairs) {
  const auto pr = pr_curve(pairs);
  double ap = 0;
  for (std::size_t i = 1; i < pr.size(); ++i) ap += (pr[i].recall - pr[i - 1].recall) * pr[i].precision;
  return ap;
}

MetricsReport compute_report(std::span<const ScoredPair> pairs) {
  MetricsReport r;
  const Counts c = class_counts(pairs);
  r.n_gen = c.gen;
  r.n_imp = c.imp;
  r.roc = roc_curve(pairs);
  r.pr = pr_curve(pairs);
  r.auc = trapezoid_auc(r.roc);
  r.eer = compute_eer(pairs);
  r.ap = compute_ap(pairs);
  return r;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw ContractError("mean_std of an empty list");
  MeanStd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace avsync
