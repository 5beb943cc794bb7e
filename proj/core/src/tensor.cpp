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

#include "avsync/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "avsync/errors.hpp"

namespace avsync {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  return os.str();
}

void check_shape(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor shape must have at least one axis");
  for (std::size_t e : shape) {
    if (e == 0) throw ShapeError("tensor extent must be >= 1, got shape " + shape_string(shape));
  }
}

Tensor::Tensor(Shape shape, Real fill) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(shape_size(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<Real> data) : shape_(std::move(shape)), data_(data.begin(), data.end()) {
  check_shape(shape_);
  if (data_.size() != shape_size(shape_)) {
    throw ShapeError("data length " + std::to_string(data_.size()) + " does not match shape " +
                     shape_string(shape_));
  }
}

Tensor Tensor::filled(Shape shape, Real value) { return Tensor(std::move(shape), value); }

Tensor Tensor::random(Shape shape, const RandomSpec& spec, std::uint64_t seed) {
  Tensor t(std::move(shape));
  std::mt19937_64 rng(seed);
  if (spec.kind == Distribution::kUniform) {
    if (!(spec.b > spec.a)) throw ConfigError("uniform fill needs a < b");
    std::uniform_real_distribution<double> dist(spec.a, spec.b);
    for (auto& v : t.data_) v = static_cast<Real>(dist(rng));
  } else {
    if (!(spec.b >= 0.0)) throw ConfigError("normal fill needs a non-negative stddev");
    std::normal_distribution<double> dist(spec.a, spec.b);
    for (auto& v : t.data_) v = static_cast<Real>(dist(rng));
  }
  return t;
}

Tensor Tensor::from(std::initializer_list<Real> values) {
  return Tensor({values.size()}, std::vector<Real>(values));
}

std::vector<std::size_t> Tensor::strides() const {
  std::vector<std::size_t> s(shape_.size(), 1);
  for (std::size_t i = shape_.size(); i-- > 1;) s[i - 1] = s[i] * shape_[i];
  return s;
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> index) const {
  if (index.size() != shape_.size()) throw ShapeError("index rank does not match tensor rank");
  std::size_t off = 0;
  std::size_t axis = 0;
  for (std::size_t i : index) {
    if (i >= shape_[axis]) throw ShapeError("index out of range on axis " + std::to_string(axis));
    off = off * shape_[axis] + i;
    ++axis;
  }
  return off;
}

Real& Tensor::at(std::initializer_list<std::size_t> index) { return data_[offset(index)]; }
Real Tensor::at(std::initializer_list<std::size_t> index) const { return data_[offset(index)]; }

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_size(shape) != data_.size()) {
    throw ShapeError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  }
  Tensor out;
  out.shape_ = std::move(shape);
  out.data_ = data_;
  return out;
}

std::span<Real> Tensor::ensure_grad() {
  if (grad_.size() != data_.size()) grad_.assign(data_.size(), Real(0));
  return grad_;
}

void Tensor::zero_grad() {
  if (!grad_.empty()) std::fill(grad_.begin(), grad_.end(), Real(0));
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](Real v) { return std::isfinite(v); });
}

Tensor tensor_create(const Shape& shape, Real fill) { return Tensor(shape, fill); }

Tensor tensor_create(const Shape& shape, const RandomSpec& spec, std::uint64_t seed) {
  return Tensor::random(shape, spec, seed);
}

}  // namespace avsync
