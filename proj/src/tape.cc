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

#include "timegate/tape.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "timegate/errors.h"

namespace timegate::ad {
namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap AsMatrix(std::span<const double> v, std::size_t rows,
                  std::size_t cols) {
  return ConstMap(v.data(), static_cast<Eigen::Index>(rows),
                  static_cast<Eigen::Index>(cols));
}

MutMap AsMatrix(std::span<double> v, std::size_t rows, std::size_t cols) {
  return MutMap(v.data(), static_cast<Eigen::Index>(rows),
                static_cast<Eigen::Index>(cols));
}

void RequireRank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " +
                         std::to_string(rank) + ", got shape " +
                         ShapeString(t.shape()));
  }
}

}  // namespace

double Sigmoid(double z) {
  z = std::clamp(z, -kSigmoidClamp, kSigmoidClamp);
  return 1.0 / (1.0 + std::exp(-z));
}

Tensor Tape::Record(std::string op, const std::vector<Tensor>& inputs,
                    Tensor out, BackwardFn backward) {
  bool any_grad = false;
  std::vector<std::size_t> input_ids;
  for (const Tensor& in : inputs) {
    if (in.node_id().has_value()) {
      if (in.owner() != this) {
        throw ContractError(op + ": input recorded on a different tape");
      }
      input_ids.push_back(*in.node_id());
    }
    any_grad = any_grad || in.requires_grad();
  }
  if (!any_grad) return out;
  out.set_requires_grad(true);
  out.impl_->node_id = nodes_.size();
  out.impl_->owner = this;
  nodes_.push_back(
      Node{std::move(op), std::move(input_ids), out, std::move(backward)});
  return out;
}

void Tape::Backward(const Tensor& loss) {
  if (loss.size() != 1) {
    throw ContractError("backward: loss must be a scalar, got shape " +
                        ShapeString(loss.shape()));
  }
  if (!loss.node_id().has_value() || loss.owner() != this) {
    throw ContractError("backward: loss does not belong to this tape");
  }
  for (Node& node : nodes_) node.output.ZeroGrad();
  const std::size_t last = *loss.node_id();
  nodes_[last].output.mutable_grad()[0] = 1.0;
  for (std::size_t i = last + 1; i-- > 0;) nodes_[i].backward();
}

Tensor Tape::MatMul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw DimensionError("matmul: cannot multiply " + ShapeString(a.shape()) +
                         " by " + ShapeString(b.shape()));
  }
  const std::size_t m = a.dim(0), k = a.dim(1), p = b.dim(1);
  Tensor out({m, p});
  AsMatrix(out.mutable_data(), m, p).noalias() =
      AsMatrix(a.data(), m, k) * AsMatrix(b.data(), k, p);
  return Record("matmul", {a, b}, out, [a, b, out, m, k, p]() mutable {
    auto g = AsMatrix(std::as_const(out).grad(), m, p);
    if (a.requires_grad()) {
      AsMatrix(a.mutable_grad(), m, k).noalias() +=
          g * AsMatrix(b.data(), k, p).transpose();
    }
    if (b.requires_grad()) {
      AsMatrix(b.mutable_grad(), k, p).noalias() +=
          AsMatrix(a.data(), m, k).transpose() * g;
    }
  });
}

Tensor Tape::BatchMatMul(const Tensor& a, const Tensor& b, bool transpose_b) {
  RequireRank(a, 3, "batch_matmul");
  RequireRank(b, 3, "batch_matmul");
  const std::size_t batch = a.dim(0), m = a.dim(1), k = a.dim(2);
  const std::size_t p = transpose_b ? b.dim(1) : b.dim(2);
  const std::size_t b_inner = transpose_b ? b.dim(2) : b.dim(1);
  if (b.dim(0) != batch || b_inner != k) {
    throw DimensionError("batch_matmul: cannot multiply " +
                         ShapeString(a.shape()) + " by " +
                         ShapeString(b.shape()) +
                         (transpose_b ? " (transposed)" : ""));
  }
  const std::size_t b_rows = transpose_b ? p : k;
  const std::size_t b_cols = transpose_b ? k : p;
  Tensor out({batch, m, p});
  for (std::size_t i = 0; i < batch; ++i) {
    auto am = AsMatrix(a.data().subspan(i * m * k, m * k), m, k);
    auto bm = AsMatrix(b.data().subspan(i * k * p, k * p), b_rows, b_cols);
    auto om = AsMatrix(out.mutable_data().subspan(i * m * p, m * p), m, p);
    if (transpose_b) {
      om.noalias() = am * bm.transpose();
    } else {
      om.noalias() = am * bm;
    }
  }
  return Record(
      "batch_matmul", {a, b}, out,
      [a, b, out, batch, m, k, p, b_rows, b_cols, transpose_b]() mutable {
        for (std::size_t i = 0; i < batch; ++i) {
          auto g = AsMatrix(std::as_const(out).grad().subspan(i * m * p, m * p),
                            m, p);
          auto am = AsMatrix(a.data().subspan(i * m * k, m * k), m, k);
          auto bm =
              AsMatrix(b.data().subspan(i * k * p, k * p), b_rows, b_cols);
          if (a.requires_grad()) {
            auto ga = AsMatrix(a.mutable_grad().subspan(i * m * k, m * k), m, k);
            if (transpose_b) {
              ga.noalias() += g * bm;
            } else {
              ga.noalias() += g * bm.transpose();
            }
          }
          if (b.requires_grad()) {
            auto gb = AsMatrix(b.mutable_grad().subspan(i * k * p, k * p),
                               b_rows, b_cols);
            if (transpose_b) {
              gb.noalias() += g.transpose() * am;
            } else {
              gb.noalias() += am.transpose() * g;
            }
          }
        }
      });
}

Tensor Tape::Ewise(EwiseKind kind, const Tensor& a, const Tensor& b) {
  const bool scalar_b = a.shape() != b.shape() && b.size() == 1;
  if (a.shape() != b.shape() && !scalar_b) {
    throw DimensionError("elementwise: shape mismatch " +
                         ShapeString(a.shape()) + " vs " +
                         ShapeString(b.shape()));
  }
  const std::size_t n = a.size();
  Tensor out(a.shape());
  auto o = out.mutable_data();
  auto av = a.data();
  auto bv = b.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = bv[scalar_b ? 0 : i];
    switch (kind) {
      case EwiseKind::kAdd: o[i] = av[i] + y; break;
      case EwiseKind::kSub: o[i] = av[i] - y; break;
      case EwiseKind::kMul: o[i] = av[i] * y; break;
    }
  }
  static constexpr const char* kNames[] = {"add", "sub", "mul"};
  return Record(kNames[static_cast<int>(kind)], {a, b}, out,
                [kind, a, b, out, n, scalar_b]() mutable {
                  auto g = std::as_const(out).grad();
                  if (a.requires_grad()) {
                    auto ga = a.mutable_grad();
                    for (std::size_t i = 0; i < n; ++i) {
                      ga[i] += kind == EwiseKind::kMul
                                   ? g[i] * b.data()[scalar_b ? 0 : i]
                                   : g[i];
                    }
                  }
                  if (b.requires_grad()) {
                    auto gb = b.mutable_grad();
                    for (std::size_t i = 0; i < n; ++i) {
                      double d = g[i];
                      if (kind == EwiseKind::kSub) d = -d;
                      if (kind == EwiseKind::kMul) d *= a.data()[i];
                      gb[scalar_b ? 0 : i] += d;
                    }
                  }
                });
}

Tensor Tape::Scale(const Tensor& a, double factor) {
  Tensor out(a.shape());
  auto o = out.mutable_data();
  for (std::size_t i = 0; i < a.size(); ++i) o[i] = a.data()[i] * factor;
  return Record("scale", {a}, out, [a, out, factor]() mutable {
    auto g = std::as_const(out).grad();
    auto ga = a.mutable_grad();
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * factor;
  });
}

Tensor Tape::AddConstant(const Tensor& a, std::span<const double> offsets) {
  if (offsets.size() != a.size()) {
    throw DimensionError("add_constant: " + std::to_string(offsets.size()) +
                         " offsets for tensor of shape " +
                         ShapeString(a.shape()));
  }
  Tensor out(a.shape());
  auto o = out.mutable_data();
  for (std::size_t i = 0; i < a.size(); ++i) o[i] = a.data()[i] + offsets[i];
  return Record("add_constant", {a}, out, [a, out]() mutable {
    auto g = std::as_const(out).grad();
    auto ga = a.mutable_grad();
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

Tensor Tape::Activation(ActivationKind kind, const Tensor& z) {
  Tensor out(z.shape());
  auto o = out.mutable_data();
  auto zv = z.data();
  for (std::size_t i = 0; i < zv.size(); ++i) {
    switch (kind) {
      case ActivationKind::kSigmoid: o[i] = ad::Sigmoid(zv[i]); break;
      case ActivationKind::kRelu: o[i] = zv[i] > 0.0 ? zv[i] : 0.0; break;
      case ActivationKind::kTanh: o[i] = std::tanh(zv[i]); break;
    }
  }
  static constexpr const char* kNames[] = {"sigmoid", "relu", "tanh"};
  return Record(kNames[static_cast<int>(kind)], {z}, out,
                [kind, z, out]() mutable {
                  auto g = std::as_const(out).grad();
                  auto y = std::as_const(out).data();
                  auto gz = z.mutable_grad();
                  for (std::size_t i = 0; i < g.size(); ++i) {
                    double d = 0.0;
                    switch (kind) {
                      case ActivationKind::kSigmoid: d = y[i] * (1.0 - y[i]); break;
                      case ActivationKind::kRelu: d = z.data()[i] > 0.0 ? 1.0 : 0.0; break;
                      case ActivationKind::kTanh: d = 1.0 - y[i] * y[i]; break;
                    }
                    gz[i] += g[i] * d;
                  }
                });
}

Tensor Tape::Reduce(ReduceKind kind, const Tensor& x, std::size_t axis) {
  const Shape& in_shape = x.shape();
  if (axis >= in_shape.size()) {
    throw DimensionError("reduce: axis " + std::to_string(axis) +
                         " out of range for shape " + ShapeString(in_shape));
  }
  const std::size_t extent = in_shape[axis];
  if (extent == 0) {
    throw DomainError("reduce: empty extent along axis " +
                      std::to_string(axis));
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= in_shape[i];
  for (std::size_t i = axis + 1; i < in_shape.size(); ++i) inner *= in_shape[i];
  Shape out_shape = in_shape;
  out_shape.erase(out_shape.begin() + static_cast<std::ptrdiff_t>(axis));
  Tensor out(out_shape);
  auto o = out.mutable_data();
  auto xv = x.data();
  std::vector<std::size_t> argmax;
  if (kind == ReduceKind::kMax) argmax.assign(outer * inner, 0);
  for (std::size_t a = 0; a < outer; ++a) {
    for (std::size_t c = 0; c < inner; ++c) {
      const std::size_t base = a * extent * inner + c;
      double acc = kind == ReduceKind::kMax ? xv[base] : 0.0;
      std::size_t best = 0;
      for (std::size_t j = 0; j < extent; ++j) {
        const double v = xv[base + j * inner];
        if (kind == ReduceKind::kMax) {
          if (v > acc) {
            acc = v;
            best = j;
          }
        } else {
          acc += v;
        }
      }
      if (kind == ReduceKind::kMean) acc /= static_cast<double>(extent);
      if (kind == ReduceKind::kMax) argmax[a * inner + c] = best;
      o[a * inner + c] = acc;
    }
  }
  static constexpr const char* kNames[] = {"sum", "mean", "max"};
  return Record(kNames[static_cast<int>(kind)], {x}, out,
                [kind, x, out, outer, inner, extent,
                 argmax = std::move(argmax)]() mutable {
                  auto g = std::as_const(out).grad();
                  auto gx = x.mutable_grad();
                  const double mean_scale = 1.0 / static_cast<double>(extent);
                  for (std::size_t a = 0; a < outer; ++a) {
                    for (std::size_t c = 0; c < inner; ++c) {
                      const double up = g[a * inner + c];
                      const std::size_t base = a * extent * inner + c;
                      if (kind == ReduceKind::kMax) {
                        gx[base + argmax[a * inner + c] * inner] += up;
                        continue;
                      }
                      const double d =
                          kind == ReduceKind::kMean ? up * mean_scale : up;
                      for (std::size_t j = 0; j < extent; ++j) {
                        gx[base + j * inner] += d;
                      }
                    }
                  }
                });
}

Tensor Tape::SumAll(const Tensor& x) {
  return Reduce(ReduceKind::kSum, Reshape(x, {x.size()}), 0);
}

Tensor Tape::SoftmaxCrossEntropy(const Tensor& logits,
                                 std::span<const int> labels) {
  RequireRank(logits, 2, "softmax_xent");
  const std::size_t batch = logits.dim(0), classes = logits.dim(1);
  if (labels.size() != batch) {
    throw DimensionError("softmax_xent: " + std::to_string(labels.size()) +
                         " labels for logits " + ShapeString(logits.shape()));
  }
  std::vector<double> probs(batch * classes);
  double loss = 0.0;
  auto z = logits.data();
  for (std::size_t r = 0; r < batch; ++r) {
    const int label = labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw DomainError("softmax_xent: label " + std::to_string(label) +
                        " outside [0, " + std::to_string(classes) + ")");
    }
    const double* row = z.data() + r * classes;
    const double* top = std::max_element(row, row + classes);
    const double shift = *top;
    // The maximal term contributes exactly 1; log1p keeps tiny losses exact.
    double others = 0.0;
    for (const double* c = row; c != row + classes; ++c) {
      if (c != top) others += std::exp(*c - shift);
    }
    const double log_denom = std::log1p(others);
    for (std::size_t c = 0; c < classes; ++c) {
      probs[r * classes + c] = std::exp(row[c] - shift - log_denom);
    }
    loss += -(row[label] - shift - log_denom);
  }
  Tensor out = Tensor::Scalar(loss / static_cast<double>(batch));
  std::vector<int> kept(labels.begin(), labels.end());
  return Record("softmax_xent", {logits}, out,
                [logits, out, batch, classes, probs = std::move(probs),
                 kept = std::move(kept)]() mutable {
                  const double up = std::as_const(out).grad()[0] /
                                    static_cast<double>(batch);
                  auto g = logits.mutable_grad();
                  for (std::size_t r = 0; r < batch; ++r) {
                    for (std::size_t c = 0; c < classes; ++c) {
                      const double onehot =
                          static_cast<int>(c) == kept[r] ? 1.0 : 0.0;
                      g[r * classes + c] += up * (probs[r * classes + c] - onehot);
                    }
                  }
                });
}

Tensor Tape::BceWithLogits(const Tensor& logits,
                           std::span<const double> targets) {
  if (targets.size() != logits.size()) {
    throw DimensionError("bce_logits: " + std::to_string(targets.size()) +
                         " targets for logits " + ShapeString(logits.shape()));
  }
  const std::size_t n = logits.size();
  if (n == 0) throw DomainError("bce_logits: empty logits");
  double loss = 0.0;
  auto z = logits.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = targets[i];
    if (y != 0.0 && y != 1.0) {
      throw DomainError("bce_logits: target " + std::to_string(y) +
                        " is not binary");
    }
    loss += std::max(z[i], 0.0) - z[i] * y + std::log1p(std::exp(-std::abs(z[i])));
  }
  Tensor out = Tensor::Scalar(loss / static_cast<double>(n));
  std::vector<double> kept(targets.begin(), targets.end());
  return Record("bce_logits", {logits}, out,
                [logits, out, n, kept = std::move(kept)]() mutable {
                  const double up =
                      std::as_const(out).grad()[0] / static_cast<double>(n);
                  auto g = logits.mutable_grad();
                  auto z = logits.data();
                  for (std::size_t i = 0; i < n; ++i) {
                    g[i] += up * (ad::Sigmoid(z[i]) - kept[i]);
                  }
                });
}

Tensor Tape::Reshape(const Tensor& x, Shape shape) {
  if (NumElements(shape) != x.size()) {
    throw DimensionError("reshape: cannot view " + ShapeString(x.shape()) +
                         " as " + ShapeString(shape));
  }
  Tensor out(std::move(shape), std::vector<double>(x.data().begin(), x.data().end()));
  return Record("reshape", {x}, out, [x, out]() mutable {
    auto g = std::as_const(out).grad();
    auto gx = x.mutable_grad();
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
  });
}

Tensor Tape::AddBias(const Tensor& x, const Tensor& bias) {
  RequireRank(x, 2, "add_bias");
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  if (bias.size() != cols) {
    throw DimensionError("add_bias: bias " + ShapeString(bias.shape()) +
                         " does not match " + ShapeString(x.shape()));
  }
  Tensor out(x.shape());
  auto o = out.mutable_data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      o[r * cols + c] = x.data()[r * cols + c] + bias.data()[c];
    }
  }
  return Record("add_bias", {x, bias}, out,
                [x, bias, out, rows, cols]() mutable {
                  auto g = std::as_const(out).grad();
                  if (x.requires_grad()) {
                    auto gx = x.mutable_grad();
                    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                  }
                  if (bias.requires_grad()) {
                    auto gb = bias.mutable_grad();
                    for (std::size_t r = 0; r < rows; ++r) {
                      for (std::size_t c = 0; c < cols; ++c) {
                        gb[c] += g[r * cols + c];
                      }
                    }
                  }
                });
}

Tensor Tape::Linear(const Tensor& x, const Tensor& w, const Tensor& bias) {
  return AddBias(MatMul(x, w), bias);
}

Tensor Tape::Softmax(const Tensor& x) {
  if (x.rank() == 0) throw DimensionError("softmax: scalar input");
  const std::size_t cols = x.shape().back();
  if (cols == 0) throw DomainError("softmax: empty last axis");
  const std::size_t rows = x.size() / cols;
  Tensor out(x.shape());
  auto o = out.mutable_data();
  auto xv = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = xv.data() + r * cols;
    const double shift = *std::max_element(row, row + cols);
    double denom = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      o[r * cols + c] = std::exp(row[c] - shift);
      denom += o[r * cols + c];
    }
    for (std::size_t c = 0; c < cols; ++c) o[r * cols + c] /= denom;
  }
  return Record("softmax", {x}, out, [x, out, rows, cols]() mutable {
    auto g = std::as_const(out).grad();
    auto y = std::as_const(out).data();
    auto gx = x.mutable_grad();
    for (std::size_t r = 0; r < rows; ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        dot += g[r * cols + c] * y[r * cols + c];
      }
      for (std::size_t c = 0; c < cols; ++c) {
        gx[r * cols + c] += y[r * cols + c] * (g[r * cols + c] - dot);
      }
    }
  });
}

Tensor Tape::ScaleRows(const Tensor& x, const Tensor& s) {
  if (x.rank() == 0 || s.size() != x.dim(0)) {
    throw DimensionError("scale_rows: " + ShapeString(s.shape()) +
                         " scales for " + ShapeString(x.shape()));
  }
  const std::size_t rows = x.dim(0);
  const std::size_t width = rows == 0 ? 0 : x.size() / rows;
  Tensor out(x.shape());
  auto o = out.mutable_data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      o[r * width + c] = x.data()[r * width + c] * s.data()[r];
    }
  }
  return Record("scale_rows", {x, s}, out,
                [x, s, out, rows, width]() mutable {
                  auto g = std::as_const(out).grad();
                  if (x.requires_grad()) {
                    auto gx = x.mutable_grad();
                    for (std::size_t r = 0; r < rows; ++r) {
                      for (std::size_t c = 0; c < width; ++c) {
                        gx[r * width + c] += g[r * width + c] * s.data()[r];
                      }
                    }
                  }
                  if (s.requires_grad()) {
                    auto gs = s.mutable_grad();
                    for (std::size_t r = 0; r < rows; ++r) {
                      double acc = 0.0;
                      for (std::size_t c = 0; c < width; ++c) {
                        acc += g[r * width + c] * x.data()[r * width + c];
                      }
                      gs[r] += acc;
                    }
                  }
                });
}

Tensor Tape::GatherRows(const Tensor& x, std::span<const std::size_t> rows) {
  if (x.rank() == 0) throw DimensionError("gather_rows: scalar input");
  const std::size_t n = x.dim(0);
  const std::size_t width = n == 0 ? 0 : x.size() / n;
  Shape shape = x.shape();
  shape[0] = rows.size();
  Tensor out(shape);
  auto o = out.mutable_data();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= n) {
      throw ContractError("gather_rows: row " + std::to_string(rows[i]) +
                          " out of range for " + ShapeString(x.shape()));
    }
    std::copy_n(x.data().begin() + static_cast<std::ptrdiff_t>(rows[i] * width),
                width, o.begin() + static_cast<std::ptrdiff_t>(i * width));
  }
  std::vector<std::size_t> kept(rows.begin(), rows.end());
  return Record("gather_rows", {x}, out,
                [x, out, width, kept = std::move(kept)]() mutable {
                  auto g = std::as_const(out).grad();
                  auto gx = x.mutable_grad();
                  for (std::size_t i = 0; i < kept.size(); ++i) {
                    for (std::size_t c = 0; c < width; ++c) {
                      gx[kept[i] * width + c] += g[i * width + c];
                    }
                  }
                });
}

Tensor Tape::SegmentMax(const Tensor& x, std::span<const std::size_t> offsets) {
  RequireRank(x, 2, "segment_max");
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != rows) {
    throw ContractError("segment_max: offsets must run from 0 to " +
                        std::to_string(rows));
  }
  const std::size_t segments = offsets.size() - 1;
  Tensor out({segments, cols});
  auto o = out.mutable_data();
  std::vector<std::size_t> argmax(segments * cols);
  for (std::size_t s = 0; s < segments; ++s) {
    if (offsets[s + 1] <= offsets[s]) {
      throw ContractError("segment_max: segment " + std::to_string(s) +
                          " is empty");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t best = offsets[s];
      double value = x.data()[best * cols + c];
      for (std::size_t r = offsets[s] + 1; r < offsets[s + 1]; ++r) {
        if (x.data()[r * cols + c] > value) {
          value = x.data()[r * cols + c];
          best = r;
        }
      }
      o[s * cols + c] = value;
      argmax[s * cols + c] = best;
    }
  }
  return Record("segment_max", {x}, out,
                [x, out, cols, argmax = std::move(argmax)]() mutable {
                  auto g = std::as_const(out).grad();
                  auto gx = x.mutable_grad();
                  for (std::size_t i = 0; i < argmax.size(); ++i) {
                    gx[argmax[i] * cols + i % cols] += g[i];
                  }
                });
}

}  // namespace timegate::ad
