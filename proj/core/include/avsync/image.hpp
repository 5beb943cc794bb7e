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
#include <vector>

#include "avsync/tensor.hpp"

namespace avsync {

/// Row-major image with interleaved channels; pixel values in [0, 255].
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::vector<Real> pixels;

  static Image gray(std::size_t height, std::size_t width, Real fill = 0);
  Real& at(std::size_t y, std::size_t x) { return pixels[(y * width + x) * channels]; }
  Real at(std::size_t y, std::size_t x) const { return pixels[(y * width + x) * channels]; }
};

/// Reads an 8-bit binary PGM (P5). Throws InputError naming the file otherwise;
/// colour PPM (P6) input is rejected as non-grayscale.
Image read_pgm(const std::filesystem::path& path);
/// Writes a P5 PGM; values are rounded and clamped to [0, 255].
void write_pgm(const std::filesystem::path& path, const Image& image);

/// Bilinear resampling with half-pixel centres; identity at the source size.
Image resize_bilinear(const Image& image, std::size_t height, std::size_t width);

}  // namespace avsync
