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
#include <filesystem>
#include <span>
#include <vector>

#include "avsync/tensor.hpp"

namespace avsync {

/// Mono PCM audio with samples nominally in [-1, 1].
struct AudioClip {
  std::vector<Real> samples;
  double sample_rate = 16000.0;

  double duration_s() const { return sample_rate > 0 ? samples.size() / sample_rate : 0.0; }
};

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads a little-endian mono WAV (16-bit integer PCM or 32-bit IEEE float).
/// Throws InputError naming the file on any malformed or unsupported header.
AudioClip read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::kPcm16);

/// Integer-factor decimation with a box-car anti-alias prefilter.
AudioClip decimate(const AudioClip& clip, std::size_t factor);

/// Returns `clip` at `target_rate`, decimating when the rate is an integer
/// multiple. Other ratios are rejected with InputError.
AudioClip conform_rate(const AudioClip& clip, double target_rate);

}  // namespace avsync
