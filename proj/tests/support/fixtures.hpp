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

// Shared helpers for the unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "avsync/model.hpp"
#include "avsync/pairs.hpp"
#include "avsync/synth.hpp"

namespace avsync::testing {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "avsync");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Two-block towers on tiny inputs (visual 4x9x9x1, audio 4x6x3x1), embedding 3.
/// Every layer kind of the full model appears once or more.
Architecture micro_architecture();

/// Few short clips for fast pair and pipeline tests.
SynthConfig tiny_synth(std::uint64_t seed = 1);

/// Pairs shaped for micro_architecture(). Lips and genuine audio share a
/// per-frame latent; impostor audio follows an unrelated latent.
std::vector<LabeledPair> micro_pairs(std::size_t subjects, std::size_t per_subject, std::uint64_t seed);

std::vector<char> read_bytes(const std::filesystem::path& path);

}  // namespace avsync::testing
