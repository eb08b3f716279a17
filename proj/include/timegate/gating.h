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

#ifndef TIMEGATE_GATING_H_
#define TIMEGATE_GATING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "timegate/init.h"
#include "timegate/tape.h"
#include "timegate/tensor.h"

namespace timegate::gating {

// Learned concept kernels, one row per latent concept.
struct ConceptBank {
  ad::Tensor kernels;  // [N x C]

  static ConceptBank Create(std::size_t num_kernels, std::size_t channels,
                            Rng& rng);
  std::size_t num_kernels() const { return kernels.dim(0); }
  std::size_t channels() const { return kernels.dim(1); }
};

// Two-layer MLP mapping a similarity vector to a single gating logit.
struct GatingMlp {
  ad::Tensor w1;  // [N x H]
  ad::Tensor b1;  // [H]
  ad::Tensor w2;  // [H x 1]
  ad::Tensor b2;  // [1]

  // `output_bias` initializes b2; a positive value starts with gates open.
  // `output_scale` multiplies the Glorot draw for w2; 0 starts every gate at
  // the same logit.
  static GatingMlp Create(std::size_t num_kernels, std::size_t hidden,
                          Rng& rng, double output_bias = 0.0,
                          double output_scale = 1.0);
  std::size_t num_kernels() const { return w1.dim(0); }
  std::size_t hidden() const { return w1.dim(1); }
};

struct GateDecision {
  double logit = 0.0;
  // Clipped sigmoid in training ({0} or (0.5, 1]); 0 or 1 at test time.
  double value = 0.0;
  bool open = false;
  bool noise_used = false;
};

// Decisions for a vector of logits plus the activated values as a tensor.
// In training the tensor is differentiable through the open gates.
struct GateActivation {
  std::vector<GateDecision> decisions;
  ad::Tensor values;  // [R]
};

inline constexpr double kGateThreshold = 0.5;

// s = K x. Accepts a single feature [C] -> [N] or a batch [R x C] -> [R x N].
ad::Tensor Similarity(ad::Tape& tape, const ad::Tensor& x,
                      const ConceptBank& bank);

// alpha = W2^T relu(W1^T s + b1) + b2. A single similarity vector [N] gives
// a scalar; a batch [R x N] gives [R].
ad::Tensor GateLogit(ad::Tape& tape, const ad::Tensor& s, const GatingMlp& mlp);

// Difference of two independent Gumbel(0, 1) draws, i.e. Logistic(0, 1).
double SampleGateNoise(Rng& rng);

GateDecision ActivateTrain(double logit, double noise);
GateDecision ActivateTest(double logit);

// Clipped sigmoid of (logit + noise). The clip mask is a constant of the
// forward pass: open gates back-propagate the sigmoid derivative, closed
// gates nothing.
GateActivation ActivateTrain(ad::Tape& tape, const ad::Tensor& logits,
                             std::span<const double> noise);
// Step function at sigmoid(logit) > 0.5, i.e. logit > 0. Not differentiable.
GateActivation ActivateTest(const ad::Tensor& logits);

// x * value. A single-element gate scales all of x; a vector of gates
// scales the leading slices of x one by one.
ad::Tensor ApplyGate(ad::Tape& tape, const ad::Tensor& x,
                     const ad::Tensor& gate);
ad::Tensor ApplyGate(ad::Tape& tape, const ad::Tensor& x,
                     const GateDecision& decision);

// lambda * mean(sigmoid(logits)): the expected fraction of open gates under
// logistic noise, a differentiable surrogate of the L0 norm of the gates.
ad::Tensor L0Penalty(ad::Tape& tape, const ad::Tensor& logits, double lambda);

}  // namespace timegate::gating

#endif  // TIMEGATE_GATING_H_
