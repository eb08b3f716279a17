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

#ifndef TIMEGATE_TENSOR_H_
#define TIMEGATE_TENSOR_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace timegate::ad {

using Shape = std::vector<std::size_t>;

std::size_t NumElements(const Shape& shape);
std::string ShapeString(const Shape& shape);

class Tape;

// Dense row-major float64 tensor.
//
// Tensor is a handle: copies share storage and gradient. A model parameter
// held by a module and captured by a Tape is therefore the same object, and
// gradients accumulated during Tape::Backward land on the module's parameter.
// Use Clone() for an independent deep copy.
class Tensor {
 public:
  Tensor() = default;
  // Zero-filled tensor.
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor Scalar(double value, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }

  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t size() const;

  std::span<const double> data() const;
  std::span<double> mutable_data();
  double at(std::size_t flat_index) const { return data()[flat_index]; }
  // Value of a single-element tensor.
  double item() const;

  bool requires_grad() const;
  // Enabling gradients allocates a zeroed gradient buffer.
  void set_requires_grad(bool requires_grad);
  bool has_grad() const;
  std::span<const double> grad() const;
  // Allocates a zeroed buffer on first use. Const because Tensor is a handle:
  // gradients of a shared parameter are written through any copy.
  std::span<double> mutable_grad() const;
  void ZeroGrad();

  // Identifier of the node that produced this tensor in its Tape, if any.
  std::optional<std::size_t> node_id() const;
  const Tape* owner() const;

  Tensor Clone() const;
  // Deep copy without gradient tracking.
  Tensor Detach() const;

  // True if both handles refer to the same storage.
  bool SameAs(const Tensor& other) const { return impl_ == other.impl_; }

 private:
  friend class Tape;
  struct Impl {
    Shape shape;
    std::vector<double> data;
    std::vector<double> grad;
    bool requires_grad = false;
    std::optional<std::size_t> node_id;
    const Tape* owner = nullptr;
  };
  std::shared_ptr<Impl> impl_;

  Impl& impl() const;
};

}  // namespace timegate::ad

#endif  // TIMEGATE_TENSOR_H_
