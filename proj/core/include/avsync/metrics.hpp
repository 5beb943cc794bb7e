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
#include <span>
#include <vector>

#include "avsync/tensor.hpp"

namespace avsync {

struct ScoredPair {
  Real distance = 0;
  int label = 0;  // 1 genuine, 0 impostor
};

/// Match iff distance <= tau. Throws ConfigError for tau < 0.
bool verify(Real distance, Real tau);

struct Rates {
  double tpr = 0;
  double far = 0;
  double precision = 1;
  double recall = 0;
};

/// Counting rates at one threshold. Precision is 1 when nothing is accepted.
/// Throws ContractError when either class is empty.
Rates rates_at(std::span<const ScoredPair> pairs, Real tau);

struct RocPoint {
  double threshold;
  double far;
  double tpr;
};

struct PrPoint {
  double threshold;
  double recall;
  double precision;
};

/// One point per unique distance (ascending) plus a leading point below every
/// distance, so the curve runs from (0, 0) to (1, 1).
std::vector<RocPoint> roc_curve(std::span<const ScoredPair> pairs);
/// Same thresholds as roc_curve; the leading point is (recall 0, precision 1).
std::vector<PrPoint> pr_curve(std::span<const ScoredPair> pairs);

/// Trapezoid area of an ROC list.
double trapezoid_auc(std::span<const RocPoint> roc);

/// FAR = FRR crossing, linearly interpolated between adjacent ROC points.
double compute_eer(std::span<const ScoredPair> pairs);
double compute_auc(std::span<const ScoredPair> pairs);
/// Sum over thresholds of (R_i - R_{i-1}) * P_i.
double compute_ap(std::span<const ScoredPair> pairs);

struct MetricsReport {
  std::vector<RocPoint> roc;
  std::vector<PrPoint> pr;
  double eer = 0;
  double auc = 0;
  double ap = 0;
  std::size_t n_gen = 0;
  std::size_t n_imp = 0;
};

MetricsReport compute_report(std::span<const ScoredPair> pairs);

struct MeanStd {
  double mean = 0;
  double std = 0;  // sample standard deviation; 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

}  // namespace avsync
