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
#include <memory>

#include "avsync/model.hpp"

namespace avsync {

// "AVCK", u16 version, u16 dtype tag (1 float32, 2 float64), model config,
// seed, architecture digest and text, then named parameter blobs and batch
// norm running statistics in the model's fixed order.

inline constexpr std::uint16_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path, CoupledModel& model);

/// Rebuilds the model recorded in the file.
std::unique_ptr<CoupledModel> load_checkpoint(const std::filesystem::path& path);

/// Loads into an existing model; refuses (InputError) when the architecture
/// digest or any parameter name/shape differs.
void load_checkpoint_into(const std::filesystem::path& path, CoupledModel& model);

}  // namespace avsync
