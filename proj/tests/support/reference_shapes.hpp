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

// Published per-layer output extents of the two towers at embedding size 64,
// written out by hand as the expected values for the shape tests.

#include <string>
#include <utility>
#include <vector>

namespace avsync::reference {

using ShapeRows = std::vector<std::pair<std::string, std::string>>;

inline const ShapeRows& visual_rows() {
  static const ShapeRows rows = {
      {"Conv1", "7x58x98x16"}, {"Pool1", "7x28x48x16"}, {"Conv2", "5x26x46x32"},
      {"Pool2", "5x12x22x32"}, {"Conv3", "3x10x20x64"}, {"Pool3", "3x4x9x64"},
      {"Conv4", "1x2x7x128"},  {"FC5", "256"},          {"FC6", "64"},
  };
  return rows;
}

inline const ShapeRows& audio_rows() {
  static const ShapeRows rows = {
      {"Conv1", "13x36x1x16"},  {"Pool1", "13x18x1x16"},  {"Conv2-1", "11x15x1x32"},
      {"Conv2-2", "9x12x1x32"}, {"Pool2", "9x6x1x32"},    {"Conv3-1", "7x4x1x64"},
      {"Conv3-2", "5x2x1x64"},  {"Conv4", "3x1x1x128"},   {"FC5", "64"},
  };
  return rows;
}

}  // namespace avsync::reference
