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

#include "timegate/baselines.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "timegate/errors.h"

namespace timegate::baselines {

ScSampler ScSampler::Create(int raw_dim, int light_hidden, int channels,
                            int num_classes, int segment_length, Rng& rng) {
  if (num_classes < 2) throw DomainError("scsampler needs L >= 2");
  ScSampler model;
  model.light = selector::LightNet::Create(raw_dim, light_hidden, channels, rng);
  model.w = GlorotUniform(static_cast<std::size_t>(channels),
                          static_cast<std::size_t>(num_classes), rng);
  model.b = Constant(static_cast<std::size_t>(num_classes), 0.0);
  model.segment_length = static_cast<std::size_t>(segment_length);
  return model;
}

ParamList ScSampler::Params() const {
  ParamList out;
  AppendParams(out, "light", light.Params());
  out.push_back({"head/w", w});
  out.push_back({"head/b", b});
  return out;
}

ad::Tensor ScSampler::Logits(ad::Tape& tape, const ad::Tensor& x) const {
  return tape.Linear(light.Forward(tape, x), w, b);
}

double MaxProbability(std::span<const double> logits) {
  if (logits.empty()) throw DomainError("max_probability: no classes");
  const double top = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (double z : logits) denom += std::exp(z - top);
  return 1.0 / denom;
}

double ScSamplerScore(std::span<const double> feature, const ScSampler& model) {
  const std::size_t c = model.w.dim(0), l = model.w.dim(1);
  if (feature.size() != c) {
    throw DimensionError("scsampler_score: feature of " + std::to_string(feature.size()) +
                         " channels vs head input " + std::to_string(c));
  }
  std::vector<double> logits(model.b.data().begin(), model.b.data().end());
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < l; ++j) logits[j] += feature[i] * model.w.at(i * l + j);
  }
  return MaxProbability(logits);
}

std::vector<double> ScoreVideo(const ScSampler& model,
                               const synth::VideoSample& video) {
  const synth::VideoSample* batch[] = {&video};
  ad::Tape tape;
  ad::Tensor features =
      model.light.Forward(tape, selector::LightInput(batch, model.segment_length));
  const std::size_t c = features.dim(1);
  std::vector<double> scores(features.dim(0));
  for (std::size_t t = 0; t < scores.size(); ++t) {
    scores[t] = ScSamplerScore(features.data().subspan(t * c, c), model);
  }
  return scores;
}

std::vector<std::size_t> SampleIndices(SampleMode mode, std::size_t timesteps,
                                       std::size_t k,
                                       std::span<const double> scores,
                                       std::optional<std::uint64_t> seed) {
  if (k < 1 || k > timesteps) {
    throw DomainError("sample_indices: k = " + std::to_string(k) + " not in [1, " +
                      std::to_string(timesteps) + "]");
  }
  std::vector<std::size_t> out;
  switch (mode) {
    case SampleMode::kUniform:
      for (std::size_t i = 0; i < k; ++i) out.push_back((2 * i + 1) * timesteps / (2 * k));
      break;
    case SampleMode::kRandom: {
      if (!seed) throw ContractError("sample_indices: random mode needs a seed");
      Rng rng(*seed);
      std::vector<std::size_t> all(timesteps);
      std::iota(all.begin(), all.end(), 0);
      // Partial Fisher-Yates.
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t span = timesteps - i;
        const auto j = i + std::min(span - 1, static_cast<std::size_t>(OpenUniform(rng) * span));
        std::swap(all[i], all[j]);
      }
      out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(out.begin(), out.end());
      break;
    }
    case SampleMode::kTopK: {
      if (scores.size() != timesteps) {
        throw ContractError("sample_indices: top-k needs one score per timestep");
      }
      std::vector<std::size_t> order(timesteps);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
      out.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(out.begin(), out.end());
      break;
    }
  }
  return out;
}

std::string ToString(SampleMode mode) {
  switch (mode) {
    case SampleMode::kUniform:
      return "uniform";
    case SampleMode::kRandom:
      return "random";
    case SampleMode::kTopK:
      return "topk";
  }
  return "unknown";
}

}  // namespace timegate::baselines
