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

#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <iterator>
#include <memory>
#include <random>

#include <unistd.h>

namespace avsync::testing {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  const auto name = tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
                    std::to_string(rd() % 100000);
  path_ = std::filesystem::temp_directory_path() / name;
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Architecture micro_architecture() {
  const Extent3 one{1, 1, 1};
  Architecture a;
  a.embedding = 3;
  a.visual.input = {4, 9, 9, 1};
  a.visual.blocks = {
      {"Conv1", 2, {2, 3, 3}, one, PoolSpec{"Pool1", {1, 3, 3}, {1, 2, 2}}},
      {"Conv2", 3, {2, 2, 2}, one, std::nullopt},
  };
  a.visual.hidden = {{"FC5", 4}};
  a.visual.head_name = "FC6";
  a.audio.input = {4, 6, 3, 1};
  a.audio.blocks = {
      {"Conv1", 2, {2, 3, 3}, one, PoolSpec{"Pool1", {1, 2, 1}, {1, 2, 1}}},
      {"Conv2", 2, {2, 2, 1}, one, std::nullopt},
  };
  a.audio.head_name = "FC5";
  return a;
}

SynthConfig tiny_synth(std::uint64_t seed) {
  SynthConfig c;
  c.n_subjects = 3;
  c.clips_per_subject = 2;
  c.duration_s = 1.0;
  c.seed = seed;
  return c;
}

std::vector<LabeledPair> micro_pairs(std::size_t subjects, std::size_t per_subject, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  auto speech_for = [&](const std::vector<double>& z) {
    Tensor t({4, 6, 3, 1});
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Real>(z[i / 18] + 0.3 * n01(rng));
    return t;
  };
  std::vector<LabeledPair> out;
  for (std::size_t s = 0; s < subjects; ++s) {
    for (std::size_t k = 0; k < per_subject; ++k) {
      std::vector<double> z(4), other(4);
      for (double& v : z) v = n01(rng);
      for (double& v : other) v = n01(rng);
      Tensor visual({4, 9, 9, 1});
      for (std::size_t i = 0; i < visual.size(); ++i) visual[i] = static_cast<Real>(z[i / 81] + 0.3 * n01(rng));
      auto shared = std::make_shared<const Tensor>(std::move(visual));
      LabeledPair g;
      g.visual = shared;
      g.speech = speech_for(z);
      g.subject_id = "S" + std::to_string(s);
      g.clip_id = g.subject_id + "_c" + std::to_string(k);
      LabeledPair imp = g;
      imp.speech = speech_for(other);
      imp.label = 0;
      imp.shift_s = 0.2;
      imp.direction = 1;
      out.push_back(std::move(g));
      out.push_back(std::move(imp));
    }
  }
  return out;
}

std::vector<char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace avsync::testing
