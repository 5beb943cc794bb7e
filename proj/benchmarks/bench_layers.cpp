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

#include "avsync/layers.hpp"
#include "avsync/model.hpp"
#include "avsync/ops.hpp"

namespace avsync {
namespace {

Tensor normal(const Shape& shape, std::uint64_t seed) {
  return Tensor::random(shape, RandomSpec{Distribution::kNormal, 0.0, 1.0}, seed);
}

// First visual convolution at batch size state.range(0).
void BM_Conv3dForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor x = normal({n, 9, 60, 100, 1}, 1);
  Conv3dLayer layer = Conv3dLayer::create(1, 16, {3, 3, 3}, {1, 1, 1}, 2);
  for (auto _ : state) {
    Tape tape(Tape::Mode::kNoGrad);
    benchmark::DoNotOptimize(conv3d(tape.constant(x), layer).value().data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Conv3dForward)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Conv3dBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor x = normal({n, 7, 29, 49, 16}, 1);
  Conv3dLayer layer = Conv3dLayer::create(16, 32, {3, 3, 3}, {1, 1, 1}, 2);
  layer.kernels.set_requires_grad(true);
  layer.bias.set_requires_grad(true);
  for (auto _ : state) {
    Tape tape;
    Var y = conv3d(tape.variable(x), layer);
    tape.backward(ops::sum(y));
    benchmark::DoNotOptimize(layer.kernels.grad().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Conv3dBackward)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_MaxPool3d(benchmark::State& state) {
  const Tensor x = normal({8, 7, 58, 98, 16}, 3);
  for (auto _ : state) {
    Tape tape(Tape::Mode::kNoGrad);
    benchmark::DoNotOptimize(maxpool3d(tape.constant(x), {1, 3, 3}, {1, 2, 2}).value().data().data());
  }
}
BENCHMARK(BM_MaxPool3d)->Unit(benchmark::kMillisecond);

void BM_VisualForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CoupledModel model(Architecture::standard(), ModelConfig{}, 1);
  const Tensor x = normal({n, 9, 60, 100, 1}, 4);
  for (auto _ : state) {
    Tape tape(Tape::Mode::kNoGrad);
    benchmark::DoNotOptimize(model.embed_visual(tape.constant(x), ForwardOptions{}).value().data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VisualForward)->Arg(1)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AudioForward(benchmark::State& state) {
  CoupledModel model(Architecture::standard(), ModelConfig{}, 1);
  const Tensor x = normal({32, 15, 40, 3, 1}, 5);
  for (auto _ : state) {
    Tape tape(Tape::Mode::kNoGrad);
    benchmark::DoNotOptimize(model.embed_audio(tape.constant(x), ForwardOptions{}).value().data().data());
  }
}
BENCHMARK(BM_AudioForward)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace avsync
