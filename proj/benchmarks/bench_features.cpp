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

#include <cmath>
#include <numbers>

#include "avsync/speech_features.hpp"

namespace avsync {
namespace {

AudioClip chirp(double seconds) {
  AudioClip clip;
  const auto n = static_cast<std::size_t>(seconds * clip.sample_rate);
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / clip.sample_rate;
    clip.samples[i] = static_cast<Real>(0.5 * std::sin(2 * std::numbers::pi * (200 + 900 * t) * t));
  }
  return clip;
}

void BM_MfecFrame(benchmark::State& state) {
  const AudioClip clip = chirp(0.02);
  const FeatureConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(mel_filterbank_energies(clip.samples, config).data());
}
BENCHMARK(BM_MfecFrame);

void BM_SpeechCube(benchmark::State& state) {
  const AudioClip clip = chirp(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(build_speech_cube(clip).values.data().data());
}
BENCHMARK(BM_SpeechCube)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace avsync
