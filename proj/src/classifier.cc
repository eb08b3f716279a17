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

#include "timegate/classifier.h"

#include <algorithm>
#include <string>

#include "timegate/errors.h"

namespace timegate::classifier {

HeavyNet HeavyNet::Create(const ClassifierConfig& config, Rng& rng) {
  if (config.raw_dim < 1 || config.segment_length < 1 || config.heavy_hidden < 1 ||
      config.channels < 1 || config.height < 1 || config.width < 1) {
    throw DomainError("heavynet: dimensions must be >= 1");
  }
  HeavyNet net;
  net.channels = static_cast<std::size_t>(config.channels);
  net.height = static_cast<std::size_t>(config.height);
  net.width = static_cast<std::size_t>(config.width);
  net.segment_length = static_cast<std::size_t>(config.segment_length);
  const auto in = net.segment_length * static_cast<std::size_t>(config.raw_dim);
  const auto hidden = static_cast<std::size_t>(config.heavy_hidden);
  const auto out = net.channels * net.height * net.width;
  net.w1 = GlorotUniform(in, hidden, rng);
  net.b1 = Constant(hidden, 0.0);
  net.w2 = GlorotUniform(hidden, out, rng);
  net.b2 = Constant(out, 0.0);
  return net;
}

ParamList HeavyNet::Params() const {
  return {{"w1", w1}, {"b1", b1}, {"w2", w2}, {"b2", b2}};
}

Head Head::Create(int in, int hidden, int num_classes, Rng& rng) {
  if (num_classes < 2) throw DomainError("classifier head needs L >= 2");
  const auto i = static_cast<std::size_t>(in);
  const auto h = static_cast<std::size_t>(hidden);
  const auto l = static_cast<std::size_t>(num_classes);
  return Head{GlorotUniform(i, h, rng), Constant(h, 0.0), GlorotUniform(h, l, rng),
              Constant(l, 0.0)};
}

ParamList Head::Params() const {
  return {{"w1", w1}, {"b1", b1}, {"w2", w2}, {"b2", b2}};
}

std::size_t Selection::rows() const {
  std::size_t n = 0;
  for (const auto& idx : indices) n += idx.size();
  return n;
}

std::vector<std::size_t> Selection::Offsets() const {
  std::vector<std::size_t> offsets{0};
  for (const auto& idx : indices) offsets.push_back(offsets.back() + idx.size());
  return offsets;
}

ad::Tensor HeavyInput(const Selection& selection, std::size_t segment_length) {
  if (selection.videos.size() != selection.indices.size()) {
    throw ContractError("heavy_input: videos and index lists differ in count");
  }
  if (selection.videos.empty()) throw ContractError("heavy_input: empty batch");
  const auto d = static_cast<std::size_t>(selection.videos.front()->raw_dim);
  const std::size_t width = segment_length * d;
  ad::Tensor x({selection.rows(), width});
  auto out = x.mutable_data();
  std::size_t row = 0;
  for (std::size_t b = 0; b < selection.videos.size(); ++b) {
    const synth::VideoSample& v = *selection.videos[b];
    if (static_cast<std::size_t>(v.raw_dim) != d) {
      throw DimensionError("heavy_input: videos in a batch differ in raw dimension");
    }
    const auto stride = static_cast<std::size_t>(v.frames_per_timestep);
    if (segment_length > stride) {
      throw ContractError("heavy_input: segment length exceeds frames per timestep");
    }
    for (std::size_t i : selection.indices[b]) {
      if (i >= static_cast<std::size_t>(v.num_timesteps)) {
        throw ContractError("heavynet_features: timestep " + std::to_string(i) +
                            " outside a video of " + std::to_string(v.num_timesteps));
      }
      const auto begin = v.frames.begin() + static_cast<std::ptrdiff_t>(i * stride * d);
      std::copy(begin, begin + static_cast<std::ptrdiff_t>(width),
                out.begin() + static_cast<std::ptrdiff_t>(row * width));
      ++row;
    }
  }
  return x;
}

ad::Tensor HeavyFeatures(ad::Tape& tape, const HeavyNet& net,
                         const Selection& selection) {
  ad::Tensor x = HeavyInput(selection, net.segment_length);
  if (x.dim(1) != net.w1.dim(0)) {
    throw DimensionError("heavynet: segment " + ad::ShapeString(x.shape()) +
                         " vs encoder input " + std::to_string(net.w1.dim(0)));
  }
  const std::size_t rows = x.dim(0);
  net.invocations += static_cast<std::int64_t>(rows);
  ad::Tensor hidden = tape.Relu(tape.Linear(x, net.w1, net.b1));
  ad::Tensor y = tape.Relu(tape.Linear(hidden, net.w2, net.b2));
  return tape.Reshape(y, {rows, net.channels, net.height, net.width});
}

ad::Tensor HeavyFeatures(ad::Tape& tape, const HeavyNet& net,
                         const synth::VideoSample& video,
                         std::span<const std::size_t> indices) {
  Selection selection{{&video}, {{indices.begin(), indices.end()}}};
  return HeavyFeatures(tape, net, selection);
}

ad::Tensor Classify(ad::Tape& tape, const Head& head, const ad::Tensor& features,
                    const ad::Tensor& gates, std::span<const std::size_t> offsets) {
  if (features.rank() != 2 && features.rank() != 4) {
    throw DimensionError("classify: features must be [R x C] or [R x C x H x W], got " +
                         ad::ShapeString(features.shape()));
  }
  if (offsets.size() < 2 || offsets.back() != features.dim(0)) {
    throw ContractError("classify: offsets do not cover the feature rows");
  }
  ad::Tensor y = gates.defined() ? tape.ScaleRows(features, gates) : features;
  if (y.rank() == 4) {
    const std::size_t rows = y.dim(0), c = y.dim(1);
    y = tape.Reduce(ad::ReduceKind::kMax,
                    tape.Reshape(y, {rows, c, y.dim(2) * y.dim(3)}), 2);
  }
  ad::Tensor hidden = tape.Relu(tape.Linear(y, head.w1, head.b1));
  return tape.Linear(tape.SegmentMax(hidden, offsets), head.w2, head.b2);
}

ad::Tensor TaskLoss(ad::Tape& tape, const ad::Tensor& logits,
                    std::span<const synth::VideoSample* const> videos,
                    synth::Task task) {
  if (logits.rank() != 2 || logits.dim(0) != videos.size()) {
    throw DimensionError("task_loss: logits " + ad::ShapeString(logits.shape()) +
                         " for " + std::to_string(videos.size()) + " videos");
  }
  if (task == synth::Task::kSingleLabel) {
    std::vector<int> labels;
    for (const auto* v : videos) labels.push_back(v->label());
    return tape.SoftmaxCrossEntropy(logits, labels);
  }
  const auto classes = static_cast<int>(logits.dim(1));
  std::vector<double> targets;
  for (const auto* v : videos) {
    auto t = v->Targets(classes);
    targets.insert(targets.end(), t.begin(), t.end());
  }
  return tape.BceWithLogits(logits, targets);
}

}  // namespace timegate::classifier
