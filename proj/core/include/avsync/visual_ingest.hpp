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
#include <string>
#include <vector>

#include "avsync/image.hpp"
#include "avsync/tensor.hpp"

namespace avsync {

/// Geometry of the visual input volume: 0.3 s at 30 frames/s of 60x100 crops.
struct VisualConfig {
  std::size_t frames = 9;
  std::size_t height = 60;
  std::size_t width = 100;
  double fps = 30.0;
};

/// Standardized [frames, height, width, 1] stack of mouth crops.
struct VisualCube {
  Tensor values;
  std::string clip_id;
  std::size_t start_frame = 0;
};

/// Stacks frames [start, start + config.frames), resizing each to the target
/// size when needed, then standardizes the whole volume.
VisualCube build_visual_cube(std::span<const Image> frames, std::size_t start, const VisualConfig& config = {});

/// Loads every *.pgm in `dir` in lexicographic filename order.
std::vector<Image> load_frame_dir(const std::filesystem::path& dir);

}  // namespace avsync
