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

#ifndef TIMEGATE_BASELINES_H_
#define TIMEGATE_BASELINES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "timegate/init.h"
#include "timegate/params.h"
#include "timegate/selector.h"
#include "timegate/tape.h"

namespace timegate::baselines {

// Segment-only saliency scorer: its own light encoder and a per-timestep
// softmax head. The score of a timestep is its maximum class probability.
struct ScSampler {
  selector::LightNet light;
  ad::Tensor w, b;  // [C x L], [L]
  std::size_t segment_length = 1;

  static ScSampler Create(int raw_dim, int light_hidden, int channels,
                          int num_classes, int segment_length, Rng& rng);
  ParamList Params() const;
  // Per-timestep logits [R x L] for light inputs [R x D_raw].
  ad::Tensor Logits(ad::Tape& tape, const ad::Tensor& x) const;
};

// Maximum softmax probability of one row of logits.
double MaxProbability(std::span<const double> logits);

// Score of a single light feature x [C] under the head.
double ScSamplerScore(std::span<const double> feature, const ScSampler& model);

// Scores of every timestep of a video.
std::vector<double> ScoreVideo(const ScSampler& model,
                               const synth::VideoSample& video);

enum class SampleMode { kUniform, kRandom, kTopK };

// Ascending indices, exactly k of them. Uniform picks floor((2i+1)T/(2k));
// random draws k distinct indices from `seed`; top-k takes the highest
// scores with ties to the lower index.
std::vector<std::size_t> SampleIndices(SampleMode mode, std::size_t timesteps,
                                       std::size_t k,
                                       std::span<const double> scores = {},
                                       std::optional<std::uint64_t> seed = {});

std::string ToString(SampleMode mode);

}  // namespace timegate::baselines

#endif  // TIMEGATE_BASELINES_H_
