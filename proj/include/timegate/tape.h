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

#ifndef TIMEGATE_TAPE_H_
#define TIMEGATE_TAPE_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "timegate/tensor.h"

namespace timegate::ad {

enum class EwiseKind { kAdd, kSub, kMul };
enum class ActivationKind { kSigmoid, kRelu, kTanh };
enum class ReduceKind { kSum, kMean, kMax };

// Sigmoid with its exponent argument clamped to [-40, 40].
double Sigmoid(double z);
inline constexpr double kSigmoidClamp = 40.0;

// Reverse-mode computation record.
//
// Every operation evaluates eagerly and, when any input requires a gradient,
// appends a node holding its backward closure. Nodes are stored in creation
// order, which is a topological order, and Backward walks them in reverse.
// A Tape is single-threaded; distinct tapes may be used concurrently as long
// as they only read shared parameters.
class Tape {
 public:
  using BackwardFn = std::function<void()>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Registers `out` as the result of `op` applied to `inputs`. The closure
  // reads out's gradient and accumulates into the inputs that require one.
  // Used by the built-in operations and by modules that define their own.
  Tensor Record(std::string op, const std::vector<Tensor>& inputs, Tensor out,
                BackwardFn backward);

  Tensor MatMul(const Tensor& a, const Tensor& b);
  // [B x M x K] . [B x K x P] -> [B x M x P]; with transpose_b the second
  // operand is [B x P x K].
  Tensor BatchMatMul(const Tensor& a, const Tensor& b, bool transpose_b = false);

  // Equal shapes, or `b` holding a single element (scalar broadcast).
  Tensor Ewise(EwiseKind kind, const Tensor& a, const Tensor& b);
  Tensor Add(const Tensor& a, const Tensor& b) {
    return Ewise(EwiseKind::kAdd, a, b);
  }
  Tensor Sub(const Tensor& a, const Tensor& b) {
    return Ewise(EwiseKind::kSub, a, b);
  }
  Tensor Mul(const Tensor& a, const Tensor& b) {
    return Ewise(EwiseKind::kMul, a, b);
  }
  Tensor Scale(const Tensor& a, double factor);
  // Adds a constant (non-differentiable) array of the same size.
  Tensor AddConstant(const Tensor& a, std::span<const double> offsets);

  Tensor Activation(ActivationKind kind, const Tensor& z);
  Tensor Sigmoid(const Tensor& z) {
    return Activation(ActivationKind::kSigmoid, z);
  }
  Tensor Relu(const Tensor& z) { return Activation(ActivationKind::kRelu, z); }
  Tensor Tanh(const Tensor& z) { return Activation(ActivationKind::kTanh, z); }

  // Removes `axis`. Max routes the gradient to the first maximal element.
  Tensor Reduce(ReduceKind kind, const Tensor& x, std::size_t axis);
  // Sum of all elements as a scalar.
  Tensor SumAll(const Tensor& x);

  // Mean cross-entropy of row-wise softmax against class indices.
  Tensor SoftmaxCrossEntropy(const Tensor& logits, std::span<const int> labels);
  // Mean over all entries of the binary cross-entropy with logits.
  Tensor BceWithLogits(const Tensor& logits, std::span<const double> targets);

  Tensor Reshape(const Tensor& x, Shape shape);
  // x [R x C] + bias [C], bias added to every row.
  Tensor AddBias(const Tensor& x, const Tensor& bias);
  // x . w + bias for x [R x In], w [In x Out], bias [Out].
  Tensor Linear(const Tensor& x, const Tensor& w, const Tensor& bias);
  // Softmax along the last axis.
  Tensor Softmax(const Tensor& x);
  // Multiplies the i-th leading slice of x by s[i].
  Tensor ScaleRows(const Tensor& x, const Tensor& s);
  // Selects leading slices of x in the given order.
  Tensor GatherRows(const Tensor& x, std::span<const std::size_t> rows);
  // Row-segment max: rows [offsets[s], offsets[s+1]) of x [R x F] reduce to
  // row s of the result. Every segment must be non-empty.
  Tensor SegmentMax(const Tensor& x, std::span<const std::size_t> offsets);

  // Populates gradients of every requires_grad tensor reachable from `loss`.
  // Leaf gradients accumulate across calls; intermediate ones are reset.
  void Backward(const Tensor& loss);

  std::size_t num_nodes() const { return nodes_.size(); }
  const std::string& op(std::size_t id) const { return nodes_.at(id).op; }
  const std::vector<std::size_t>& inputs(std::size_t id) const {
    return nodes_.at(id).inputs;
  }

 private:
  struct Node {
    std::string op;
    std::vector<std::size_t> inputs;
    Tensor output;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

}  // namespace timegate::ad

#endif  // TIMEGATE_TAPE_H_
