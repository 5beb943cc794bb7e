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

#include "avsync/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "avsync/errors.hpp"
#include "avsync/parallel.hpp"
#include "avsync/seed.hpp"

namespace avsync {
namespace {

constexpr Real kGuard = Real(1e-12);

std::size_t audio_start_sample(const ClipSource& clip, std::size_t start_frame) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(start_frame) * clip.audio.sample_rate / clip.fps));
}

struct ClipPairs {
  std::vector<LabeledPair> pairs;
  std::size_t skipped = 0;
};

ClipPairs clip_pairs(const ClipSource& clip, const PairGenConfig& config, std::uint64_t seed) {
  ClipPairs out;
  const VisualConfig& vc = config.visual;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift_dist(config.min_shift_s, config.max_shift_s);
  std::bernoulli_distribution coin(0.5);
  const double whole = std::floor(config.impostor_ratio);
  std::bernoulli_distribution extra(config.impostor_ratio - whole);

  for (std::size_t start = 0; start + vc.frames <= clip.frames.size(); start += config.window_stride) {
    auto genuine = speech_window(clip, start, 0, config.features);
    if (!genuine) break;
    auto visual = std::make_shared<const Tensor>(build_visual_cube(clip.frames, start, vc).values);

    LabeledPair g;
    g.speech = std::move(*genuine);
    g.visual = visual;
    g.label = 1;
    g.subject_id = clip.subject_id;
    g.clip_id = clip.clip_id;
    g.start_frame = start;
    out.pairs.push_back(std::move(g));

    std::size_t n_imp = static_cast<std::size_t>(whole) + (extra(rng) ? 1 : 0);
    for (std::size_t k = 0; k < n_imp; ++k) {
      const double shift = config.fixed_shift_s ? *config.fixed_shift_s : shift_dist(rng);
      const long hops = static_cast<long>(std::max<std::size_t>(1, shift_hops(shift, config.features)));
      const int first = coin(rng) ? 1 : -1;
      std::optional<Tensor> speech;
      int dir = 0;
      for (int d : {first, -first}) {
        speech = speech_window(clip, start, d * hops, config.features);
        if (speech) {
          dir = d;
          break;
        }
      }
      if (!speech) {
        ++out.skipped;
        continue;
      }
      LabeledPair p;
      p.speech = std::move(*speech);
      p.visual = visual;
      p.label = 0;
      p.subject_id = clip.subject_id;
      p.clip_id = clip.clip_id;
      p.start_frame = start;
      p.shift_s = static_cast<double>(hops) * config.features.hop_length() / config.features.sample_rate;
      p.direction = dir;
      out.pairs.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace

void PairGenConfig::validate() const {
  if (!(min_shift_s > 0) || !(max_shift_s >= min_shift_s)) {
    throw ConfigError("impostor shifts need 0 < min_shift_s <= max_shift_s");
  }
  if (fixed_shift_s && !(*fixed_shift_s > 0)) throw ConfigError("fixed impostor shift must be positive");
  if (!(impostor_ratio >= 0)) throw ConfigError("impostor_ratio must be >= 0");
  if (window_stride == 0) throw ConfigError("window_stride must be >= 1");
  features.validate();
}

std::size_t PairSet::genuine_count() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const LabeledPair& p) { return p.label == 1; }));
}

std::size_t shift_hops(double shift_s, const FeatureConfig& features) {
  const double hop_s = static_cast<double>(features.hop_length()) / features.sample_rate;
  return static_cast<std::size_t>(std::llround(shift_s / hop_s));
}

std::optional<Tensor> speech_window(const ClipSource& clip, std::size_t start_frame, long hop_offset,
                                    const FeatureConfig& features) {
  if (clip.audio.sample_rate != features.sample_rate) {
    throw InputError("clip " + clip.clip_id + ": sample rate " + std::to_string(clip.audio.sample_rate) +
                     " does not match the feature rate " + std::to_string(features.sample_rate));
  }
  const long base = static_cast<long>(audio_start_sample(clip, start_frame));
  const long begin = base + hop_offset * static_cast<long>(features.hop_length());
  const auto length = static_cast<long>(std::llround(features.duration_s * features.sample_rate));
  if (begin < 0 || begin + length > static_cast<long>(clip.audio.samples.size())) return std::nullopt;
  AudioClip window;
  window.sample_rate = clip.audio.sample_rate;
  window.samples.assign(clip.audio.samples.begin() + begin, clip.audio.samples.begin() + begin + length);
  return build_speech_cube(window, features).values;
}

PairSet generate_pairs(std::span<const ClipSource> clips, const PairGenConfig& config) {
  config.validate();
  auto per_clip = parallel_map<ClipPairs>(
      clips.size(), [&](std::size_t i) { return clip_pairs(clips[i], config, derive_seed(config.seed, i)); });
  PairSet set;
  for (auto& c : per_clip) {
    set.skipped += c.skipped;
    for (auto& p : c.pairs) set.pairs.push_back(std::move(p));
  }
  return set;
}

void SelectionConfig::validate() const {
  if (!(eta0 > 0)) throw ConfigError("eta0 must be > 0");
}

Real adaptive_threshold(std::span<const Real> genuine_distances, Real eta0) {
  if (genuine_distances.empty()) throw ContractError("adaptive threshold needs a genuine distance");
  const auto [lo, hi] = std::minmax_element(genuine_distances.begin(), genuine_distances.end());
  return eta0 * std::abs(*hi / std::max(*lo, kGuard));
}

std::vector<std::size_t> select_impostors(std::span<const Real> genuine_distances,
                                          std::span<const Real> impostor_distances, Real eta0) {
  std::vector<std::size_t> kept;
  if (genuine_distances.empty()) {
    for (std::size_t i = 0; i < impostor_distances.size(); ++i) kept.push_back(i);
    return kept;
  }
  const Real eta = adaptive_threshold(genuine_distances, eta0);
  const Real max_gen = *std::max_element(genuine_distances.begin(), genuine_distances.end());
  for (std::size_t i = 0; i < impostor_distances.size(); ++i) {
    if (impostor_distances[i] <= max_gen + eta) kept.push_back(i);
  }
  return kept;
}

std::vector<std::size_t> select_batch(std::span<const Real> distances, std::span<const int> labels,
                                      const SelectionConfig& config) {
  if (distances.size() != labels.size()) throw ShapeError("select_batch: distances and labels differ in length");
  std::vector<std::size_t> kept;
  if (!config.enabled) {
    for (std::size_t i = 0; i < distances.size(); ++i) kept.push_back(i);
    return kept;
  }
  config.validate();
  std::vector<Real> gen, imp;
  std::vector<std::size_t> imp_index;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (labels[i] == 1) {
      gen.push_back(distances[i]);
    } else {
      imp.push_back(distances[i]);
      imp_index.push_back(i);
    }
  }
  std::vector<bool> keep(distances.size(), false);
  for (std::size_t i = 0; i < labels.size(); ++i) keep[i] = labels[i] == 1;
  for (std::size_t j : select_impostors(gen, imp, config.eta0)) keep[imp_index[j]] = true;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) kept.push_back(i);
  }
  return kept;
}

}  // namespace avsync
