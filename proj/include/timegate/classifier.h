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

#ifndef TIMEGATE_CLASSIFIER_H_
#define TIMEGATE_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "timegate/init.h"
#include "timegate/params.h"
#include "timegate/synthdata.h"
#include "timegate/tape.h"

namespace timegate::classifier {

struct ClassifierConfig {
  int raw_dim = 32;
  int segment_length = 16;  // M
  int heavy_hidden = 64;
  int channels = 32;  // C'
  int height = 1;
  int width = 1;
  int head_hidden = 256;
  int num_classes = 10;  // L
  synth::Task task = synth::Task::kSingleLabel;
};

// Segment encoder: M concatenated raw frames -> hidden -> C' x H x W, relu
// after both layers. Counts how many segments it has encoded.
struct HeavyNet {
  ad::Tensor w1, b1, w2, b2;
  std::size_t channels = 0, height = 1, width = 1;
  std::size_t segment_length = 1;
  mutable std::int64_t invocations = 0;

  static HeavyNet Create(const ClassifierConfig& config, Rng& rng);
  ParamList Params() const;
};

// Two-layer head: in -> hidden (relu) -> temporal max -> L.
struct Head {
  ad::Tensor w1, b1, w2, b2;

  static Head Create(int in, int hidden, int num_classes, Rng& rng);
  ParamList Params() const;
};

// Per-video selected timesteps flattened for a batch.
struct Selection {
  std::vector<const synth::VideoSample*> videos;
  std::vector<std::vector<std::size_t>> indices;

  std::size_t rows() const;
  // offsets[b] .. offsets[b+1] are the rows of video b.
  std::vector<std::size_t> Offsets() const;
};

// Raw segments [R x M*D_raw] for the selected timesteps. Throws ContractError
// for an index outside the video.
ad::Tensor HeavyInput(const Selection& selection, std::size_t segment_length);

// Encodes every selected segment: [R x C' x H x W].
ad::Tensor HeavyFeatures(ad::Tape& tape, const HeavyNet& net,
                         const Selection& selection);
ad::Tensor HeavyFeatures(ad::Tape& tape, const HeavyNet& net,
                         const synth::VideoSample& video,
                         std::span<const std::size_t> indices);

// features [R x C' x H x W] (or [R x C']); gates [R] or undefined for no
// scaling; offsets split rows into videos. Returns logits [B x L].
ad::Tensor Classify(ad::Tape& tape, const Head& head, const ad::Tensor& features,
                    const ad::Tensor& gates, std::span<const std::size_t> offsets);

ad::Tensor TaskLoss(ad::Tape& tape, const ad::Tensor& logits,
                    std::span<const synth::VideoSample* const> videos,
                    synth::Task task);

}  // namespace timegate::classifier

#endif  // TIMEGATE_CLASSIFIER_H_
