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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "avsync/audio.hpp"
#include "avsync/image.hpp"
#include "avsync/speech_features.hpp"
#include "avsync/tensor.hpp"
#include "avsync/visual_ingest.hpp"

namespace avsync {

/// One recording: a mono audio stream and its time-aligned grayscale frames.
struct ClipSource {
  std::string subject_id;
  std::string clip_id;
  AudioClip audio;
  std::vector<Image> frames;
  double fps = 30.0;
};

struct LabeledPair {
  Tensor speech;                         // [15, 40, 3]
  std::shared_ptr<const Tensor> visual;  // [9, 60, 100, 1], shared by a window's pairs
  int label = 1;                         // 1 genuine, 0 impostor
  std::string subject_id;
  std::string clip_id;
  std::size_t start_frame = 0;
  double shift_s = 0.0;  // magnitude; 0 for genuine pairs
  int direction = 0;     // +1 audio taken later than the lips, -1 earlier
};

struct PairGenConfig {
  double min_shift_s = 0.1;
  double max_shift_s = 0.5;
  /// Test-time shift; replaces the random draw when set.
  std::optional<double> fixed_shift_s;
  /// Impostors per genuine window; the fractional part is a coin flip.
  double impostor_ratio = 1.0;
  /// Frames between consecutive genuine windows.
  std::size_t window_stride = 6;
  FeatureConfig features;
  VisualConfig visual;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PairSet {
  std::vector<LabeledPair> pairs;
  /// Impostor draws dropped because neither shift direction fit the stream.
  std::size_t skipped = 0;

  std::size_t genuine_count() const;
  std::size_t impostor_count() const { return pairs.size() - genuine_count(); }
};

/// Shift in whole feature hops.
std::size_t shift_hops(double shift_s, const FeatureConfig& features);

/// Speech cube for the audio window starting `hop_offset` feature hops away
/// from the start of video frame `start_frame`. Empty when it does not fit.
std::optional<Tensor> speech_window(const ClipSource& clip, std::size_t start_frame, long hop_offset,
                                    const FeatureConfig& features);

/// Genuine pairs at every window; impostors pair the same lips with audio
/// shifted by a uniform draw in [min_shift_s, max_shift_s], never wrapped.
/// Deterministic for a given seed regardless of worker count.
PairSet generate_pairs(std::span<const ClipSource> clips, const PairGenConfig& config);

struct SelectionConfig {
  Real eta0 = Real(0.1);
  bool enabled = true;

  void validate() const;
};

/// eta0 * |max_gen / max(min_gen, 1e-12)|. Throws ContractError on an empty input.
Real adaptive_threshold(std::span<const Real> genuine_distances, Real eta0);

/// Indices into `impostor_distances` with d <= max_gen + eta. Every impostor
/// is kept when there is no genuine distance.
std::vector<std::size_t> select_impostors(std::span<const Real> genuine_distances,
                                          std::span<const Real> impostor_distances, Real eta0);

/// Batch form: indices of kept pairs (all genuine plus selected impostors), ascending.
std::vector<std::size_t> select_batch(std::span<const Real> distances, std::span<const int> labels,
                                      const SelectionConfig& config);

}  // namespace avsync
