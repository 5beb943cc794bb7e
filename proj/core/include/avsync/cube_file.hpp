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

#include "avsync/tensor.hpp"

namespace avsync {

// Packed cube: "AVCB", u16 version, u16 rank, u32 extents[rank], then
// little-endian float32 payload in row-major order.

inline constexpr std::uint16_t kCubeFileVersion = 1;

void write_cube(const std::filesystem::path& path, const Tensor& cube);
/// Throws InputError naming the file on a bad magic, version, or truncated payload.
Tensor read_cube(const std::filesystem::path& path);

}  // namespace avsync
