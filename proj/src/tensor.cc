/* Copyright 2026 The TimeGate Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "timegate/tensor.h"

#include <algorithm>
#include <sstream>

#include "timegate/errors.h"

namespace timegate::ad {

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t extent : shape) n *= extent;
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

Tensor::Tensor(Shape shape, bool requires_grad)
    : impl_(std::make_shared<Impl>()) {
  impl_->data.assign(NumElements(shape), 0.0);
  impl_->shape = std::move(shape);
  set_requires_grad(requires_grad);
}

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad)
    : impl_(std::make_shared<Impl>()) {
  if (NumElements(shape) != data.size()) {
    throw DimensionError("tensor shape " + ShapeString(shape) + " needs " +
                         std::to_string(NumElements(shape)) +
                         " values, got " + std::to_string(data.size()));
  }
  impl_->shape = std::move(shape);
  impl_->data = std::move(data);
  set_requires_grad(requires_grad);
}

Tensor Tensor::Scalar(double value, bool requires_grad) {
  return Tensor(Shape{}, {value}, requires_grad);
}

Tensor::Impl& Tensor::impl() const {
  if (!impl_) throw ContractError("use of an undefined tensor");
  return *impl_;
}

const Shape& Tensor::shape() const { return impl().shape; }

std::size_t Tensor::dim(std::size_t axis) const {
  const Shape& s = shape();
  if (axis >= s.size()) {
    throw DimensionError("axis " + std::to_string(axis) +
                         " out of range for shape " + ShapeString(s));
  }
  return s[axis];
}

std::size_t Tensor::size() const { return impl().data.size(); }

std::span<const double> Tensor::data() const { return impl().data; }

std::span<double> Tensor::mutable_data() { return impl().data; }

double Tensor::item() const {
  if (size() != 1) {
    throw DimensionError("item() on tensor of shape " + ShapeString(shape()));
  }
  return impl().data[0];
}

bool Tensor::requires_grad() const { return impl().requires_grad; }

void Tensor::set_requires_grad(bool requires_grad) {
  Impl& self = impl();
  self.requires_grad = requires_grad;
  if (requires_grad && self.grad.size() != self.data.size()) {
    self.grad.assign(self.data.size(), 0.0);
  }
}

bool Tensor::has_grad() const { return !impl().grad.empty() || size() == 0; }

std::span<const double> Tensor::grad() const { return impl().grad; }

std::span<double> Tensor::mutable_grad() const {
  Impl& self = impl();
  if (self.grad.size() != self.data.size()) {
    self.grad.assign(self.data.size(), 0.0);
  }
  return self.grad;
}

void Tensor::ZeroGrad() {
  Impl& self = impl();
  std::fill(self.grad.begin(), self.grad.end(), 0.0);
}

std::optional<std::size_t> Tensor::node_id() const { return impl().node_id; }

const Tape* Tensor::owner() const { return impl().owner; }

Tensor Tensor::Clone() const {
  Tensor copy(shape(), impl().data, requires_grad());
  if (!impl().grad.empty()) copy.impl_->grad = impl().grad;
  return copy;
}

Tensor Tensor::Detach() const { return Tensor(shape(), impl().data, false); }

}  // namespace timegate::ad
