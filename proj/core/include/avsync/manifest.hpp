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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "avsync/pairs.hpp"

namespace avsync {

struct ManifestRecord {
  std::string subject_id;
  std::filesystem::path audio_path;
  std::filesystem::path frames_dir;
  double fps = 30.0;
  double sample_rate = 16000.0;
};

struct ManifestOptions {
  /// Accept frame rates other than 30 frames/s.
  bool allow_fps = false;
  /// Check that every referenced path exists.
  bool check_paths = true;
};

/// CSV with a header row (subject_id,audio_path,frames_dir,fps,sample_rate)
/// or JSON Lines with the same keys; chosen by the .jsonl extension. Relative
/// paths resolve against the manifest's directory. Data problems throw InputError.
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path, const ManifestOptions& options = {});
/// Same format choice as read_manifest; paths are written relative to the manifest.
void write_manifest(const std::filesystem::path& path, std::span<const ManifestRecord> records);

/// Reads the WAV and PGM frames of every record (in parallel, ordered).
/// Clip ids are the frame directory names.
std::vector<ClipSource> load_clips(std::span<const ManifestRecord> records);

}  // namespace avsync
