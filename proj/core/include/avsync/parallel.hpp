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
#include <functional>
#include <vector>

namespace avsync {

/// Worker count: hardware concurrency, capped by the AVSYNC_THREADS
/// environment variable when it holds a positive integer.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. Results come
/// back in index order. The first exception thrown (lowest index) is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn);

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Keeps large freed blocks on the heap instead of returning them to the OS
/// (glibc only; a no-op elsewhere). Training allocates and frees activations
/// of the same sizes every step, and fresh pages cost more than the math.
void tune_allocator();

}  // namespace avsync

#include <exception>
#include <optional>

namespace avsync {

template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  parallel_for(n, [&](std::size_t i) { slots[i].emplace(fn(i)); });
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace avsync
