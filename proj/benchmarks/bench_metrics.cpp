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

#include <benchmark/benchmark.h>

#include <random>

#include "avsync/metrics.hpp"

namespace avsync {
namespace {

std::vector<ScoredPair> scores(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gen(0.5, 0.2), imp(1.0, 0.3);
  std::vector<ScoredPair> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].label = static_cast<int>(i % 2);
    out[i].distance = static_cast<Real>(out[i].label ? gen(rng) : imp(rng));
  }
  return out;
}

void BM_MetricsReport(benchmark::State& state) {
  const auto s = scores(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_report(s).eer);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MetricsReport)->RangeMultiplier(10)->Range(100, 100000)->Complexity(benchmark::oNLogN);

}  // namespace
}  // namespace avsync
