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
#include <functional>
#include <random>

#include "avsync/errors.hpp"
#include "avsync/metrics.hpp"
#include "oracles.hpp"

namespace avsync {
namespace {

std::vector<ScoredPair> random_scores(std::size_t n, std::uint64_t seed, double separation, int levels = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<ScoredPair> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i < 2 ? static_cast<int>(i) : static_cast<int>(rng() % 2);
    double d = std::abs(1.0 + (label == 0 ? separation : 0.0) + 0.5 * n01(rng));
    if (levels > 0) d = std::round(d * levels) / levels;
    out[i] = {static_cast<Real>(d), label};
  }
  return out;
}

TEST(Verify, InclusiveBoundary) {
  EXPECT_TRUE(verify(0.3, 0.5));
  EXPECT_TRUE(verify(0.5, 0.5));
  EXPECT_FALSE(verify(0.6, 0.5));
  EXPECT_THROW(verify(0.1, -0.1), ConfigError);
}

TEST(RatesAt, Examples) {
  const std::vector<ScoredPair> sep{{0.05, 1}, {0.08, 1}, {0.92, 0}, {0.97, 0}};
  const Rates r = rates_at(sep, 0.5);
  EXPECT_EQ(r.tpr, 1.0);
  EXPECT_EQ(r.far, 0.0);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  const Rates z = rates_at(sep, 0.0);
  EXPECT_EQ(z.tpr, 0.0);
  EXPECT_EQ(z.far, 0.0);
  EXPECT_EQ(z.precision, 1.0);
  EXPECT_THROW(rates_at(std::vector<ScoredPair>{{0.1, 1}}, 0.5), ContractError);
}

TEST(RatesAt, MatchesCountingOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = random_scores(50, seed, 0.4, 10);
    for (int k = 0; k < 20; ++k) {
      const Real tau = static_cast<Real>(0.1 * k);
      std::size_t tp = 0, fa = 0, ng = 0, ni = 0;
      for (const auto& p : s) {
        (p.label == 1 ? ng : ni) += 1;
        if (p.distance <= tau) (p.label == 1 ? tp : fa) += 1;
      }
      const Rates r = rates_at(s, tau);
      EXPECT_EQ(r.tpr, static_cast<double>(tp) / ng);
      EXPECT_EQ(r.far, static_cast<double>(fa) / ni);
      EXPECT_EQ(r.precision, tp + fa == 0 ? 1.0 : static_cast<double>(tp) / (tp + fa));
    }
  }
}

TEST(Curves, EndpointsAndMonotonicity) {
  const auto s = random_scores(120, 3, 0.3, 20);
  const auto roc = roc_curve(s);
  const auto pr = pr_curve(s);
  ASSERT_EQ(roc.size(), pr.size());
  EXPECT_EQ(roc.front().far, 0.0);
  EXPECT_EQ(roc.front().tpr, 0.0);
  EXPECT_EQ(roc.back().far, 1.0);
  EXPECT_EQ(roc.back().tpr, 1.0);
  EXPECT_EQ(pr.front().recall, 0.0);
  EXPECT_EQ(pr.front().precision, 1.0);
  for (std::size_t i = 1; i < roc.size(); ++i) {
    EXPECT_LT(roc[i - 1].threshold, roc[i].threshold);
    EXPECT_LE(roc[i - 1].far, roc[i].far);
    EXPECT_LE(roc[i - 1].tpr, roc[i].tpr);
    EXPECT_EQ(pr[i].recall, roc[i].tpr);
  }
}

TEST(Eer, Examples) {
  std::vector<ScoredPair> sep;
  for (int i = 0; i < 10; ++i) {
    sep.push_back({static_cast<Real>(0.01 * i), 1});
    sep.push_back({static_cast<Real>(0.9 + 0.01 * i), 0});
  }
  EXPECT_NEAR(compute_eer(sep), 0.0, 1e-12);
  std::vector<ScoredPair> same;
  for (double d : {0.2, 0.5, 0.5, 0.9}) {
    same.push_back({static_cast<Real>(d), 1});
    same.push_back({static_cast<Real>(d), 0});
  }
  EXPECT_NEAR(compute_eer(same), 0.5, 1e-12);
  EXPECT_THROW(compute_eer(std::vector<ScoredPair>{{0.1, 0}, {0.2, 0}}), ContractError);
}

TEST(Eer, MatchesDenseSweepOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_scores(200, seed, 0.2 + 0.05 * static_cast<double>(seed % 5), seed % 2 ? 50 : 0);
    EXPECT_NEAR(compute_eer(s), oracle::eer_dense_sweep(s), 1e-3) << seed;
  }
}

TEST(Auc, Examples) {
  const std::vector<ScoredPair> sep{{0.05, 1}, {0.08, 1}, {0.92, 0}, {0.97, 0}};
  EXPECT_EQ(compute_auc(sep), 1.0);
  EXPECT_EQ(compute_ap(sep), 1.0);
  const auto random = random_scores(20000, 7, 0.0);
  EXPECT_NEAR(compute_auc(random), 0.5, 0.05);
  EXPECT_THROW(compute_auc(std::vector<ScoredPair>{{0.1, 1}}), ContractError);
  EXPECT_THROW(compute_ap(std::vector<ScoredPair>{{0.1, 1}}), ContractError);
}

TEST(Auc, MatchesAllPairsOracleWithTies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_scores(200, seed, 0.3, seed % 3 == 0 ? 8 : 0);
    EXPECT_NEAR(compute_auc(s), oracle::auc_all_pairs(s), 1e-9) << seed;
    EXPECT_NEAR(compute_ap(s), oracle::ap_counting(s), 1e-12) << seed;
  }
}

TEST(Metrics, InvariantUnderStrictlyIncreasingTransforms) {
  const auto s = random_scores(200, 11, 0.3, 30);
  const MetricsReport base = compute_report(s);
  const std::vector<std::function<double(double)>> transforms{
      [](double d) { return std::exp(d); }, [](double d) { return 3 * d + 7; },
      [](double d) { return std::pow(d, 3.0); }, [](double d) { return std::log1p(d); }};
  for (const auto& f : transforms) {
    auto t = s;
    for (auto& p : t) p.distance = static_cast<Real>(f(p.distance));
    const MetricsReport r = compute_report(t);
    EXPECT_NEAR(r.eer, base.eer, 1e-12);
    EXPECT_NEAR(r.auc, base.auc, 1e-12);
    EXPECT_NEAR(r.ap, base.ap, 1e-12);
  }
}

TEST(Auc, ExactlyInvariantUnderImpostorDuplication) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = random_scores(150, seed, 0.3, seed % 2 ? 10 : 0);
    auto dup = s;
    for (const auto& p : s) {
      if (p.label == 0) dup.push_back(p);
    }
    EXPECT_EQ(compute_auc(dup), compute_auc(s));
  }
}

TEST(Report, BundlesEverything) {
  const auto s = random_scores(80, 2, 0.5);
  const MetricsReport r = compute_report(s);
  EXPECT_EQ(r.n_gen + r.n_imp, s.size());
  EXPECT_EQ(r.eer, compute_eer(s));
  EXPECT_EQ(r.auc, trapezoid_auc(r.roc));
  EXPECT_EQ(r.ap, compute_ap(s));
  EXPECT_GT(r.auc, 0.5);
}

TEST(MeanStd, SampleStatistics) {
  const MeanStd one = mean_std(std::vector<double>{0.4});
  EXPECT_EQ(one.mean, 0.4);
  EXPECT_EQ(one.std, 0.0);
  const MeanStd m = mean_std(std::vector<double>{1, 2, 3, 4});
  EXPECT_NEAR(m.mean, 2.5, 1e-15);
  EXPECT_NEAR(m.std, std::sqrt(5.0 / 3.0), 1e-15);
}

}  // namespace
}  // namespace avsync
