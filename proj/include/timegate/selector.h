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

#ifndef TIMEGATE_SELECTOR_H_
#define TIMEGATE_SELECTOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "timegate/gating.h"
#include "timegate/init.h"
#include "timegate/params.h"
#include "timegate/synthdata.h"
#include "timegate/tape.h"

namespace timegate::selector {

enum class ContextMode { kFrame, kContext };
enum class Mode { kTrain, kTest };

struct SelectorConfig {
  int raw_dim = 32;
  int light_hidden = 64;
  int channels = 32;  // C
  int num_kernels = 128;  // N
  int gate_hidden = 64;
  ContextMode context_mode = ContextMode::kContext;
  int segment_length = 16;  // M
  // Initial gating output bias; positive starts with most gates open.
  double gate_bias = 3.0;
  // Scale of the gating MLP's initial output weights.
  double gate_init_scale = 0.3;
};

// Per-timestep encoder D_raw -> hidden -> C with relu in between.
struct LightNet {
  ad::Tensor w1, b1, w2, b2;

  static LightNet Create(int raw_dim, int hidden, int channels, Rng& rng);
  // x [R x D_raw] -> [R x C].
  ad::Tensor Forward(ad::Tape& tape, const ad::Tensor& x) const;
  ParamList Params() const;
  std::size_t channels() const { return w2.dim(1); }
};

// Single-head scaled dot-product self-attention with a residual add.
struct SelfAttention {
  ad::Tensor wq, wk, wv;  // [C x C]

  static SelfAttention Create(int channels, Rng& rng);
  // x [B x T x C] -> [B x T x C].
  ad::Tensor Forward(ad::Tape& tape, const ad::Tensor& x) const;
  ParamList Params() const;
};

struct Selector {
  SelectorConfig config;
  LightNet light;
  SelfAttention attention;  // undefined tensors in frame mode
  gating::ConceptBank bank;
  gating::GatingMlp gate;

  static Selector Create(const SelectorConfig& config, Rng& rng);
  bool has_context() const { return config.context_mode == ContextMode::kContext; }
  ParamList Params() const;
};

struct SelectionResult {
  std::vector<gating::GateDecision> decisions;
  std::vector<std::size_t> selected_indices;  // ascending, open gates
  ad::Tensor activated;                        // [T]
};

// Light frame index for each heavy timestep i whose segment starts at frame
// i * stride: start + floor(M / 2). Throws ContractError when an index falls
// outside [0, num_frames).
std::vector<std::size_t> AlignTimesteps(std::size_t num_heavy,
                                        std::size_t segment_length,
                                        std::size_t stride,
                                        std::size_t num_frames);

// Raw light inputs of a batch: [B*T x D_raw], one aligned frame per timestep.
ad::Tensor LightInput(std::span<const synth::VideoSample* const> videos,
                      std::size_t segment_length);

// x [B*T x D_raw] -> features [B*T x C] (self-attention applied in context
// mode, within each video).
ad::Tensor LightFeatures(ad::Tape& tape, const Selector& selector,
                         const ad::Tensor& x, std::size_t batch,
                         std::size_t timesteps);

// features [R x C] -> logits [R].
ad::Tensor GateLogits(ad::Tape& tape, const Selector& selector,
                      const ad::Tensor& features);

// Selection of one video. Train mode draws one noise sample per timestep.
SelectionResult Select(ad::Tape& tape, const Selector& selector,
                       const synth::VideoSample& video, Mode mode, Rng& rng);

// Splits activated gates of a batch into per-video results.
std::vector<SelectionResult> SplitSelections(
    const gating::GateActivation& activation, std::size_t batch,
    std::size_t timesteps);

// Exactly k timesteps ranked by sigmoid(logit), ties to the lower index;
// returned ascending.
std::vector<std::size_t> TopKByLogit(std::span<const double> logits,
                                     std::size_t k);

// Test-time fallback for an empty selection: the highest-logit timestep.
std::vector<std::size_t> WithFallback(const SelectionResult& result);

std::string ToString(ContextMode mode);
ContextMode ContextModeFromString(const std::string& name);

}  // namespace timegate::selector

#endif  // TIMEGATE_SELECTOR_H_
