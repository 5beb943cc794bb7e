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

#include "avsync/visual_ingest.hpp"

#include <algorithm>

#include "avsync/errors.hpp"
#include "avsync/speech_features.hpp"

namespace avsync {

VisualCube build_visual_cube(std::span<const Image> frames, std::size_t start, const VisualConfig& config) {
  if (frames.size() < start + config.frames) {
    throw InputError("need " + std::to_string(config.frames) + " frames from index " + std::to_string(start) +
                     ", only " + std::to_string(frames.size()) + " available");
  }
  const std::size_t plane = config.height * config.width;
  Tensor stack({config.frames, config.height, config.width, 1});
  auto out = stack.data();
  for (std::size_t t = 0; t < config.frames; ++t) {
    const Image& src = frames[start + t];
    if (src.channels != 1) throw InputError("frame " + std::to_string(start + t) + " is not grayscale");
    if (src.pixels.size() != src.height * src.width) throw InputError("frame buffer size mismatch");
    if (src.height == config.height && src.width == config.width) {
      std::copy(src.pixels.begin(), src.pixels.end(), out.begin() + static_cast<std::ptrdiff_t>(t * plane));
    } else {
      const Image resized = resize_bilinear(src, config.height, config.width);
      std::copy(resized.pixels.begin(), resized.pixels.end(), out.begin() + static_cast<std::ptrdiff_t>(t * plane));
    }
  }
  VisualCube cube;
  cube.values = standardize(stack);
  cube.start_frame = start;
  return cube;
}

std::vector<Image> load_frame_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InputError("frame directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Image> frames;
  frames.reserve(files.size());
  for (const auto& f : files) frames.push_back(read_pgm(f));
  return frames;
}

}  // namespace avsync
