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

#include "timegate/gating.h"

#include <cmath>
#include <string>

#include "timegate/errors.h"

namespace timegate::gating {

ConceptBank ConceptBank::Create(std::size_t num_kernels, std::size_t channels,
                                Rng& rng) {
  if (num_kernels == 0) throw DomainError("concept bank needs N >= 1");
  return ConceptBank{GlorotUniform(num_kernels, channels, rng)};
}

GatingMlp GatingMlp::Create(std::size_t num_kernels, std::size_t hidden,
                            Rng& rng, double output_bias,
                            double output_scale) {
  if (!(output_scale >= 0.0)) throw DomainError("gate output scale must be >= 0");
  ad::Tensor w1 = GlorotUniform(num_kernels, hidden, rng);
  ad::Tensor w2 = GlorotUniform(hidden, 1, rng);
  for (double& v : w2.mutable_data()) v *= output_scale;
  return GatingMlp{w1, Constant(hidden, 0.0), w2, Constant(1, output_bias)};
}

ad::Tensor Similarity(ad::Tape& tape, const ad::Tensor& x,
                      const ConceptBank& bank) {
  const std::size_t channels = bank.channels();
  if (x.rank() == 1) {
    if (x.dim(0) != channels) {
      throw DimensionError("similarity: feature " + ad::ShapeString(x.shape()) +
                           " vs concept kernels " +
                           ad::ShapeString(bank.kernels.shape()));
    }
    ad::Tensor s = tape.MatMul(bank.kernels, tape.Reshape(x, {channels, 1}));
    return tape.Reshape(s, {bank.num_kernels()});
  }
  if (x.rank() != 2 || x.dim(1) != channels) {
    throw DimensionError("similarity: features " + ad::ShapeString(x.shape()) +
                         " vs concept kernels " +
                         ad::ShapeString(bank.kernels.shape()));
  }
  const std::size_t rows = x.dim(0);
  ad::Tensor s = tape.BatchMatMul(
      tape.Reshape(x, {1, rows, channels}),
      tape.Reshape(bank.kernels, {1, bank.num_kernels(), channels}), true);
  return tape.Reshape(s, {rows, bank.num_kernels()});
}

ad::Tensor GateLogit(ad::Tape& tape, const ad::Tensor& s, const GatingMlp& mlp) {
  const bool single = s.rank() == 1;
  if ((single && s.dim(0) != mlp.num_kernels()) ||
      (!single && (s.rank() != 2 || s.dim(1) != mlp.num_kernels()))) {
    throw DimensionError("gate_logit: similarity " + ad::ShapeString(s.shape()) +
                         " vs MLP input " + std::to_string(mlp.num_kernels()));
  }
  const std::size_t rows = single ? 1 : s.dim(0);
  ad::Tensor batch = single ? tape.Reshape(s, {1, mlp.num_kernels()}) : s;
  ad::Tensor hidden = tape.Relu(tape.Linear(batch, mlp.w1, mlp.b1));
  ad::Tensor alpha = tape.Linear(hidden, mlp.w2, mlp.b2);
  return single ? tape.Reshape(alpha, {}) : tape.Reshape(alpha, {rows});
}

double SampleGateNoise(Rng& rng) {
  const double g1 = -std::log(-std::log(OpenUniform(rng)));
  const double g2 = -std::log(-std::log(OpenUniform(rng)));
  return g1 - g2;
}

GateDecision ActivateTrain(double logit, double noise) {
  const double g = ad::Sigmoid(logit + noise);
  const bool open = g > kGateThreshold;
  return GateDecision{logit, open ? g : 0.0, open, noise != 0.0};
}

GateDecision ActivateTest(double logit) {
  const bool open = ad::Sigmoid(logit) > kGateThreshold;
  return GateDecision{logit, open ? 1.0 : 0.0, open, false};
}

GateActivation ActivateTrain(ad::Tape& tape, const ad::Tensor& logits,
                             std::span<const double> noise) {
  if (noise.size() != logits.size()) {
    throw DimensionError("activate_train: " + std::to_string(noise.size()) +
                         " noise samples for " + std::to_string(logits.size()) +
                         " logits");
  }
  GateActivation result;
  const std::size_t n = logits.size();
  std::vector<double> values(n);
  std::vector<double> slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    GateDecision d = ActivateTrain(logits.data()[i], noise[i]);
    values[i] = d.value;
    slope[i] = d.open ? d.value * (1.0 - d.value) : 0.0;
    result.decisions.push_back(d);
  }
  ad::Tensor out({n}, std::move(values));
  result.values = tape.Record(
      "clipped_sigmoid", {logits}, out,
      [logits, out, slope = std::move(slope)]() {
        auto g = out.grad();
        auto gl = logits.mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) gl[i] += g[i] * slope[i];
      });
  return result;
}

GateActivation ActivateTest(const ad::Tensor& logits) {
  GateActivation result;
  std::vector<double> values;
  for (double logit : logits.data()) {
    result.decisions.push_back(ActivateTest(logit));
    values.push_back(result.decisions.back().value);
  }
  const std::size_t n = values.size();
  result.values = ad::Tensor({n}, std::move(values));
  return result;
}

ad::Tensor ApplyGate(ad::Tape& tape, const ad::Tensor& x,
                     const ad::Tensor& gate) {
  if (gate.size() == 1) return tape.Mul(x, gate);
  return tape.ScaleRows(x, gate);
}

ad::Tensor ApplyGate(ad::Tape& tape, const ad::Tensor& x,
                     const GateDecision& decision) {
  return tape.Mul(x, ad::Tensor::Scalar(decision.value));
}

ad::Tensor L0Penalty(ad::Tape& tape, const ad::Tensor& logits, double lambda) {
  if (lambda < 0.0 || std::isnan(lambda)) {
    throw DomainError("l0_penalty: lambda must be >= 0, got " +
                      std::to_string(lambda));
  }
  if (logits.size() == 0) return ad::Tensor::Scalar(0.0);
  ad::Tensor flat = tape.Reshape(logits, {logits.size()});
  return tape.Scale(tape.Reduce(ad::ReduceKind::kMean, tape.Sigmoid(flat), 0),
                    lambda);
}

}  // namespace timegate::gating
