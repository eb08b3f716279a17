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

#include "timegate/selector.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "timegate/errors.h"

namespace timegate::selector {

LightNet LightNet::Create(int raw_dim, int hidden, int channels, Rng& rng) {
  const auto d = static_cast<std::size_t>(raw_dim);
  const auto h = static_cast<std::size_t>(hidden);
  const auto c = static_cast<std::size_t>(channels);
  LightNet net;
  net.w1 = GlorotUniform(d, h, rng);
  net.b1 = Constant(h, 0.0);
  net.w2 = GlorotUniform(h, c, rng);
  net.b2 = Constant(c, 0.0);
  return net;
}

ad::Tensor LightNet::Forward(ad::Tape& tape, const ad::Tensor& x) const {
  if (x.rank() != 2 || x.dim(1) != w1.dim(0)) {
    throw DimensionError("lightnet: input " + ad::ShapeString(x.shape()) +
                         " vs raw dimension " + std::to_string(w1.dim(0)));
  }
  return tape.Linear(tape.Relu(tape.Linear(x, w1, b1)), w2, b2);
}

ParamList LightNet::Params() const {
  return {{"w1", w1}, {"b1", b1}, {"w2", w2}, {"b2", b2}};
}

SelfAttention SelfAttention::Create(int channels, Rng& rng) {
  const auto c = static_cast<std::size_t>(channels);
  SelfAttention attn;
  attn.wq = GlorotUniform(c, c, rng);
  attn.wk = GlorotUniform(c, c, rng);
  // Zero value projection: the layer starts as the identity.
  attn.wv = ad::Tensor({c, c}, std::vector<double>(c * c, 0.0), true);
  return attn;
}

ad::Tensor SelfAttention::Forward(ad::Tape& tape, const ad::Tensor& x) const {
  if (x.rank() != 3 || x.dim(2) != wq.dim(0)) {
    throw DimensionError("self_attention: input " + ad::ShapeString(x.shape()) +
                         " vs channels " + std::to_string(wq.dim(0)));
  }
  const std::size_t b = x.dim(0), t = x.dim(1), c = x.dim(2);
  ad::Tensor flat = tape.Reshape(x, {b * t, c});
  auto project = [&](const ad::Tensor& w) {
    return tape.Reshape(tape.MatMul(flat, w), {b, t, c});
  };
  ad::Tensor q = project(wq), k = project(wk), v = project(wv);
  ad::Tensor scores =
      tape.Scale(tape.BatchMatMul(q, k, true), 1.0 / std::sqrt(static_cast<double>(c)));
  ad::Tensor attended = tape.BatchMatMul(tape.Softmax(scores), v);
  return tape.Add(x, attended);
}

ParamList SelfAttention::Params() const {
  return {{"wq", wq}, {"wk", wk}, {"wv", wv}};
}

Selector Selector::Create(const SelectorConfig& config, Rng& rng) {
  if (config.raw_dim < 1 || config.channels < 1 || config.light_hidden < 1 ||
      config.gate_hidden < 1 || config.segment_length < 1) {
    throw DomainError("selector: dimensions must be >= 1");
  }
  Selector s;
  s.config = config;
  s.light = LightNet::Create(config.raw_dim, config.light_hidden, config.channels, rng);
  if (config.context_mode == ContextMode::kContext) {
    s.attention = SelfAttention::Create(config.channels, rng);
  }
  s.bank = gating::ConceptBank::Create(static_cast<std::size_t>(config.num_kernels),
                                       static_cast<std::size_t>(config.channels), rng);
  s.gate = gating::GatingMlp::Create(static_cast<std::size_t>(config.num_kernels),
                                     static_cast<std::size_t>(config.gate_hidden), rng,
                                     config.gate_bias, config.gate_init_scale);
  return s;
}

ParamList Selector::Params() const {
  ParamList out;
  AppendParams(out, "light", light.Params());
  if (has_context()) AppendParams(out, "attention", attention.Params());
  out.push_back({"concepts", bank.kernels});
  AppendParams(out, "gate", {{"w1", gate.w1}, {"b1", gate.b1},
                             {"w2", gate.w2}, {"b2", gate.b2}});
  return out;
}

std::vector<std::size_t> AlignTimesteps(std::size_t num_heavy,
                                        std::size_t segment_length,
                                        std::size_t stride,
                                        std::size_t num_frames) {
  if (segment_length < 1) throw ContractError("align_timesteps: M must be >= 1");
  std::vector<std::size_t> out(num_heavy);
  for (std::size_t i = 0; i < num_heavy; ++i) {
    out[i] = i * stride + segment_length / 2;
    if (out[i] >= num_frames) {
      throw ContractError("align_timesteps: light index " + std::to_string(out[i]) +
                          " outside a video of " + std::to_string(num_frames) +
                          " frames");
    }
  }
  return out;
}

ad::Tensor LightInput(std::span<const synth::VideoSample* const> videos,
                      std::size_t segment_length) {
  if (videos.empty()) throw ContractError("light_input: empty batch");
  const auto t = static_cast<std::size_t>(videos.front()->num_timesteps);
  const auto d = static_cast<std::size_t>(videos.front()->raw_dim);
  ad::Tensor x({videos.size() * t, d});
  auto out = x.mutable_data();
  std::size_t row = 0;
  for (const synth::VideoSample* v : videos) {
    if (static_cast<std::size_t>(v->num_timesteps) != t ||
        static_cast<std::size_t>(v->raw_dim) != d) {
      throw DimensionError("light_input: videos in a batch differ in shape");
    }
    if (segment_length > static_cast<std::size_t>(v->frames_per_timestep)) {
      throw ContractError("light_input: segment length exceeds frames per timestep");
    }
    for (std::size_t f : AlignTimesteps(t, segment_length,
                                        static_cast<std::size_t>(v->frames_per_timestep),
                                        static_cast<std::size_t>(v->num_frames()))) {
      auto frame = v->Frame(static_cast<int>(f));
      std::copy(frame.begin(), frame.end(), out.begin() + static_cast<std::ptrdiff_t>(row * d));
      ++row;
    }
  }
  return x;
}

ad::Tensor LightFeatures(ad::Tape& tape, const Selector& selector,
                         const ad::Tensor& x, std::size_t batch,
                         std::size_t timesteps) {
  ad::Tensor features = selector.light.Forward(tape, x);
  if (!selector.has_context()) return features;
  const std::size_t c = selector.light.channels();
  ad::Tensor mixed =
      selector.attention.Forward(tape, tape.Reshape(features, {batch, timesteps, c}));
  return tape.Reshape(mixed, {batch * timesteps, c});
}

ad::Tensor GateLogits(ad::Tape& tape, const Selector& selector,
                      const ad::Tensor& features) {
  return gating::GateLogit(tape, gating::Similarity(tape, features, selector.bank),
                           selector.gate);
}

SelectionResult Select(ad::Tape& tape, const Selector& selector,
                       const synth::VideoSample& video, Mode mode, Rng& rng) {
  const synth::VideoSample* batch[] = {&video};
  const auto t = static_cast<std::size_t>(video.num_timesteps);
  ad::Tensor x = LightInput(batch, static_cast<std::size_t>(selector.config.segment_length));
  ad::Tensor logits = GateLogits(tape, selector, LightFeatures(tape, selector, x, 1, t));
  gating::GateActivation activation;
  if (mode == Mode::kTrain) {
    std::vector<double> noise(t);
    for (double& g : noise) g = gating::SampleGateNoise(rng);
    activation = gating::ActivateTrain(tape, logits, noise);
  } else {
    activation = gating::ActivateTest(logits);
  }
  return std::move(SplitSelections(activation, 1, t).front());
}

std::vector<SelectionResult> SplitSelections(
    const gating::GateActivation& activation, std::size_t batch,
    std::size_t timesteps) {
  if (activation.decisions.size() != batch * timesteps) {
    throw DimensionError("split_selections: " + std::to_string(activation.decisions.size()) +
                         " decisions for " + std::to_string(batch) + " x " +
                         std::to_string(timesteps));
  }
  std::vector<SelectionResult> out(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    SelectionResult& r = out[b];
    r.decisions.assign(activation.decisions.begin() + static_cast<std::ptrdiff_t>(b * timesteps),
                       activation.decisions.begin() +
                           static_cast<std::ptrdiff_t>((b + 1) * timesteps));
    std::vector<double> values(timesteps);
    for (std::size_t i = 0; i < timesteps; ++i) {
      values[i] = r.decisions[i].value;
      if (r.decisions[i].open) r.selected_indices.push_back(i);
    }
    r.activated = ad::Tensor({timesteps}, std::move(values));
  }
  return out;
}

std::vector<std::size_t> TopKByLogit(std::span<const double> logits,
                                     std::size_t k) {
  if (k > logits.size()) {
    throw DomainError("top-k: k = " + std::to_string(k) + " exceeds " +
                      std::to_string(logits.size()) + " timesteps");
  }
  std::vector<std::size_t> order(logits.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ad::Sigmoid(logits[a]) > ad::Sigmoid(logits[b]);
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> WithFallback(const SelectionResult& result) {
  if (!result.selected_indices.empty()) return result.selected_indices;
  if (result.decisions.empty()) throw ContractError("selection has no timesteps");
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.decisions.size(); ++i) {
    if (result.decisions[i].logit > result.decisions[best].logit) best = i;
  }
  return {best};
}

std::string ToString(ContextMode mode) {
  return mode == ContextMode::kContext ? "context" : "frame";
}

ContextMode ContextModeFromString(const std::string& name) {
  if (name == "context") return ContextMode::kContext;
  if (name == "frame") return ContextMode::kFrame;
  throw DomainError("unknown context mode '" + name + "'");
}

}  // namespace timegate::selector
