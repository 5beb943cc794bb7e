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
#include <filesystem>
#include <vector>

#include "avsync/manifest.hpp"
#include "avsync/pairs.hpp"

namespace avsync {

/// Desk-scale stand-in corpus. Each clip carries a smooth random loudness
/// envelope; the audio is a subject-pitched harmonic tone scaled by it and
/// the frames show a mouth whose opening follows the same envelope.
struct SynthConfig {
  std::size_t n_subjects = 8;
  std::size_t clips_per_subject = 4;
  double duration_s = 3.0;
  double fps = 30.0;
  double sample_rate = 16000.0;
  std::size_t height = 60;
  std::size_t width = 100;
  /// Gaussian smoothing of the per-frame envelope noise, in frames.
  double envelope_sigma_frames = 2.0;
  /// Variance share of a second, slower envelope component.
  double slow_share = 0.0;
  double slow_sigma_frames = 9.0;
  double audio_noise = 0.01;
  /// Share of the carrier that is envelope-shaped white noise rather than the voiced tone.
  double breath = 1.0;
  double pixel_noise = 2.0;
  /// Scales how much face shading, mouth width and lip tone differ between subjects.
  double appearance_spread = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthCorpus {
  std::vector<ClipSource> clips;
  /// Per clip, the envelope value driving each video frame (in [0, 1]).
  std::vector<std::vector<double>> envelopes;
};

/// Bitwise deterministic for a given config. Audio samples lie on the 16-bit
/// PCM grid and pixels are integers, so written files read back exactly.
SynthCorpus generate_corpus(const SynthConfig& config);

/// Writes <dir>/audio/<clip>.wav, <dir>/frames/<clip>/NNNN.pgm and
/// <dir>/manifest.csv; returns the records.
std::vector<ManifestRecord> write_corpus(const std::filesystem::path& dir, const SynthCorpus& corpus);

}  // namespace avsync
