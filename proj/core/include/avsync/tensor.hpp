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
#include <cstdint>
#include <initializer_list>
#include <new>
#include <span>
#include <string>
#include <vector>

namespace avsync {

#if defined(AVSYNC_SINGLE_PRECISION)
using Real = float;
#else
using Real = double;
#endif

using Shape = std::vector<std::size_t>;

/// Cache-line aligned storage. Vectorized kernels peel a different number of
/// scalar elements depending on the start address, which changes summation
/// order; fixing the alignment keeps results bitwise repeatable.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t kAlignment = 64;

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{kAlignment}));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{kAlignment}); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using RealBuffer = std::vector<Real, AlignedAllocator<Real>>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Throws ShapeError when any extent is zero or the shape is empty.
void check_shape(const Shape& shape);

enum class Distribution { kUniform, kNormal };

/// Parameters of a seeded random fill. For kUniform the range is [a, b);
/// for kNormal `a` is the mean and `b` the standard deviation.
struct RandomSpec {
  Distribution kind = Distribution::kUniform;
  double a = 0.0;
  double b = 1.0;
};

/// Dense row-major array with an optional gradient slot.
///
/// Values are stored flat; element (i0, ..., ik) lives at the offset given by
/// the row-major strides of `shape()`. The gradient buffer, when allocated,
/// always has the same length as the data.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, Real fill = Real(0));
  Tensor(Shape shape, std::vector<Real> data);

  static Tensor filled(Shape shape, Real value);
  static Tensor random(Shape shape, const RandomSpec& spec, std::uint64_t seed);
  static Tensor from(std::initializer_list<Real> values);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }

  std::span<Real> data() { return data_; }
  std::span<const Real> data() const { return data_; }

  Real& operator[](std::size_t i) { return data_[i]; }
  Real operator[](std::size_t i) const { return data_[i]; }

  /// Multi-index access; bounds are checked.
  Real& at(std::initializer_list<std::size_t> index);
  Real at(std::initializer_list<std::size_t> index) const;

  std::vector<std::size_t> strides() const;

  /// Same data under a new shape of identical element count.
  Tensor reshaped(Shape shape) const;

  bool requires_grad() const { return requires_grad_; }
  void set_requires_grad(bool value) { requires_grad_ = value; }

  bool has_grad() const { return !grad_.empty(); }
  std::span<Real> grad() { return grad_; }
  std::span<const Real> grad() const { return grad_; }
  /// Allocates the gradient slot (zero filled) if missing and returns it.
  std::span<Real> ensure_grad();
  void zero_grad();
  void clear_grad() { grad_.clear(); }

  bool all_finite() const;

 private:
  std::size_t offset(std::initializer_list<std::size_t> index) const;

  Shape shape_;
  RealBuffer data_;
  bool requires_grad_ = false;
  RealBuffer grad_;
};

/// Seeded constructor covering both constant and random fills.
Tensor tensor_create(const Shape& shape, Real fill);
Tensor tensor_create(const Shape& shape, const RandomSpec& spec, std::uint64_t seed);

}  // namespace avsync
