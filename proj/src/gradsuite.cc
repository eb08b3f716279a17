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

#include "timegate/gradsuite.h"

#include <algorithm>
#include <cmath>

#include "timegate/classifier.h"
#include "timegate/gating.h"
#include "timegate/gradcheck.h"
#include "timegate/selector.h"
#include "timegate/training.h"

namespace timegate::harness {
namespace {

using ad::ReduceKind;
using ad::ScalarFn;
using ad::Tape;
using ad::Tensor;

Tensor RandomTensor(const ad::Shape& shape, Rng& rng) {
  Tensor t(shape);
  for (double& v : t.mutable_data()) {
    v = 4.0 * OpenUniform(rng) - 2.0;
    if (std::abs(v) < 1e-3) v = 0.5;
  }
  return t;
}

// Overwrites a zero-initialized parameter in place so its gradient and the
// gradients flowing through it are not trivially zero.
void Scramble(const Tensor& t, Rng& rng) {
  Tensor target = t;
  for (double& v : target.mutable_data()) v = 2.0 * OpenUniform(rng) - 1.0;
}

void Record(std::vector<GradSuiteEntry>& out, const std::string& name, double err) {
  for (auto& e : out) {
    if (e.name == name) {
      e.max_relative_error = std::max(e.max_relative_error, err);
      return;
    }
  }
  out.push_back({name, err});
}

void OperationChecks(std::vector<GradSuiteEntry>& out, Rng& rng) {
  for (int trial = 0; trial < 3; ++trial) {
    Tensor other = RandomTensor({3, 4}, rng);
    Tensor rhs = RandomTensor({4, 2}, rng);
    Tensor batch_rhs = RandomTensor({2, 3, 4}, rng);
    Tensor bias = RandomTensor({4}, rng);
    Tensor scales = RandomTensor({3}, rng);
    std::vector<double> targets{1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 0};
    std::vector<int> labels{3, 0, 2};
    std::vector<std::size_t> rows{2, 0, 2};
    std::vector<std::size_t> offsets{0, 1, 3};
    const std::vector<std::pair<std::string, ScalarFn>> cases = {
        {"matmul", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.MatMul(v, rhs))); }},
        {"matmul_rhs",
         [&](Tape& t, const Tensor& v) {
           return t.SumAll(t.Tanh(t.MatMul(other, t.Reshape(v, {4, 3}))));
         }},
        {"batch_matmul",
         [&](Tape& t, const Tensor& v) {
           return t.SumAll(t.Sigmoid(t.BatchMatMul(t.Reshape(v, {2, 3, 2}),
                                                   t.Reshape(t.Scale(batch_rhs, 0.5), {2, 2, 6}))));
         }},
        {"batch_matmul_transposed",
         [&](Tape& t, const Tensor& v) {
           return t.SumAll(t.Tanh(t.BatchMatMul(t.Reshape(v, {2, 2, 3}),
                                                t.Reshape(other, {2, 2, 3}), true)));
         }},
        {"ewise_add_sub_mul",
         [&](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(t.Sub(v, other), t.Add(v, other))); }},
        {"ewise_scalar",
         [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.Mul(v, Tensor::Scalar(1.7)))); }},
        {"scale", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Scale(t.Sigmoid(v), -3.0)); }},
        {"sigmoid", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(t.Sigmoid(v), other)); }},
        {"relu", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(t.Relu(v), other)); }},
        {"tanh", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(t.Tanh(v), other)); }},
        {"reduce_sum",
         [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.Reduce(ReduceKind::kSum, v, 1))); }},
        {"reduce_mean",
         [&](Tape& t, const Tensor& v) {
           return t.SumAll(t.ScaleRows(t.Tanh(v), t.Reduce(ReduceKind::kMean, v, 1)));
         }},
        {"reduce_max",
         [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.Reduce(ReduceKind::kMax, v, 0))); }},
        {"softmax", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(t.Softmax(v), other)); }},
        {"softmax_xent", [&](Tape& t, const Tensor& v) { return t.SoftmaxCrossEntropy(v, labels); }},
        {"bce_logits", [&](Tape& t, const Tensor& v) { return t.BceWithLogits(v, targets); }},
        {"add_bias", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Sigmoid(t.AddBias(v, bias))); }},
        {"scale_rows", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.ScaleRows(v, scales))); }},
        {"gather_rows", [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.GatherRows(v, rows))); }},
        {"segment_max",
         [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.SegmentMax(v, offsets))); }},
    };
    for (const auto& [name, fn] : cases) {
      Record(out, name, ad::FiniteDiffCheck(fn, RandomTensor({3, 4}, rng)).max_relative_error);
    }
  }
}

void GatingChecks(std::vector<GradSuiteEntry>& out, Rng& rng) {
  gating::ConceptBank bank = gating::ConceptBank::Create(5, 4, rng);
  gating::GatingMlp mlp = gating::GatingMlp::Create(5, 6, rng, 0.1);
  Scramble(mlp.w2, rng);
  Record(out, "similarity",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& v) {
               return t.SumAll(t.Tanh(gating::Similarity(t, v, bank)));
             },
             RandomTensor({3, 4}, rng))
             .max_relative_error);
  Record(out, "similarity_kernels",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& k) {
               gating::ConceptBank b{k};
               return t.SumAll(t.Tanh(gating::Similarity(t, Tensor({4}, {0.3, -1.2, 0.8, 1.9}), b)));
             },
             bank.kernels)
             .max_relative_error);
  Record(out, "gate_logit",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& s) { return gating::GateLogit(t, s, mlp); },
             RandomTensor({5}, rng))
             .max_relative_error);
  // Noise places every noisy logit 0.8 away from the threshold.
  Tensor logits = RandomTensor({6}, rng);
  std::vector<double> noise(6);
  for (std::size_t i = 0; i < 6; ++i) noise[i] = (i % 2 ? 0.8 : -0.8) - logits.at(i);
  Tensor weights = RandomTensor({6}, rng);
  Record(out, "clipped_sigmoid",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& a) {
               return t.SumAll(t.Mul(gating::ActivateTrain(t, a, noise).values, weights));
             },
             logits)
             .max_relative_error);
  Record(out, "l0_penalty",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& a) { return gating::L0Penalty(t, a, 0.7); }, logits)
             .max_relative_error);
}

void SelectorChecks(std::vector<GradSuiteEntry>& out, Rng& rng) {
  selector::LightNet light = selector::LightNet::Create(3, 5, 4, rng);
  Record(out, "lightnet",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& x) { return t.SumAll(t.Tanh(light.Forward(t, x))); },
             RandomTensor({4, 3}, rng))
             .max_relative_error);
  selector::SelfAttention attn = selector::SelfAttention::Create(4, rng);
  Scramble(attn.wv, rng);
  Tensor weights = RandomTensor({2, 3, 4}, rng);
  Record(out, "self_attention",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& x) { return t.SumAll(t.Mul(attn.Forward(t, x), weights)); },
             RandomTensor({2, 3, 4}, rng))
             .max_relative_error);
  Tensor x = RandomTensor({2, 3, 4}, rng);
  Record(out, "self_attention_query",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& wq) {
               selector::SelfAttention a = attn;
               a.wq = wq;
               return t.SumAll(t.Mul(a.Forward(t, x), weights));
             },
             attn.wq)
             .max_relative_error);
}

void ClassifierChecks(std::vector<GradSuiteEntry>& out, Rng& rng) {
  classifier::Head head = classifier::Head::Create(3, 5, 4, rng);
  std::vector<std::size_t> offsets{0, 2, 3};
  std::vector<int> labels{1, 3};
  Tensor gates({3}, {0.9, 0.6, 0.75});
  Record(out, "classify",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& y) {
               return t.SoftmaxCrossEntropy(classifier::Classify(t, head, y, gates, offsets), labels);
             },
             RandomTensor({3, 3, 2, 2}, rng))
             .max_relative_error);
  Tensor features = RandomTensor({3, 3, 2, 2}, rng);
  Record(out, "classify_gates",
         ad::FiniteDiffCheck(
             [&](Tape& t, const Tensor& g) {
               return t.SoftmaxCrossEntropy(classifier::Classify(t, head, features, g, offsets),
                                            labels);
             },
             gates)
             .max_relative_error);
}

// Two hand-built 4-timestep videos and a small model of every component.
struct Toy {
  Model model;
  std::vector<synth::VideoSample> videos;
  std::vector<double> noise;
};

// With `closed_second`, every gate of the second video is closed and its
// strongest timestep runs through the fallback.
Toy MakeToy(synth::Task task, Rng& rng, bool closed_second = false) {
  ExperimentConfig config;
  config.seed = 17;
  config.mode = TrainMode::kEndToEnd;
  config.model = {5, 4, 5, 4, 6, 3, 2, 2, 5, 2, 0.5};
  config.train.lambda = 0.3;
  synth::ActivitySpec spec;
  spec.num_classes = 3;
  spec.raw_dim = 3;
  spec.timesteps = 4;
  spec.frames_per_timestep = 2;
  spec.task = task;
  Toy toy{BuildModel(config, spec), {}, {}};
  Scramble(toy.model.selector->gate.w2, rng);
  Scramble(toy.model.selector->attention.wv, rng);
  const std::vector<std::vector<int>> labels = task == synth::Task::kSingleLabel
                                                   ? std::vector<std::vector<int>>{{0}, {2}}
                                                   : std::vector<std::vector<int>>{{0, 1}, {2}};
  for (const auto& l : labels) {
    synth::VideoSample v;
    v.num_timesteps = 4;
    v.frames_per_timestep = 2;
    v.raw_dim = 3;
    v.labels = l;
    v.relevance.assign(4, 0);
    v.prototypes.assign(4, 0);
    Tensor frames = RandomTensor({8 * 3}, rng);
    v.frames.assign(frames.data().begin(), frames.data().end());
    toy.videos.push_back(std::move(v));
  }
  // Logits at the current parameters decide the noise: gates alternate open
  // and closed, 0.8 away from the threshold.
  std::vector<const synth::VideoSample*> ptrs{&toy.videos[0], &toy.videos[1]};
  std::vector<std::size_t> ids{0, 1};
  auto choices = ChooseTimesteps(toy.model, ptrs, ids, 0);
  for (std::size_t b = 0; b < choices.size(); ++b) {
    const auto& logits = choices[b].logits;
    for (std::size_t i = 0; i < logits.size(); ++i) {
      const bool open = i % 2 && !(closed_second && b == 1);
      // Closed gates sit at distinct margins so the fallback argmax is stable.
      const double target = open ? 0.8 : -0.8 - 0.3 * static_cast<double>(i);
      toy.noise.push_back(target - logits[i]);
    }
  }
  return toy;
}

void EndToEndChecks(std::vector<GradSuiteEntry>& out, synth::Task task, Rng& rng,
                    bool closed_second = false) {
  Toy toy = MakeToy(task, rng, closed_second);
  std::vector<const synth::VideoSample*> ptrs{&toy.videos[0], &toy.videos[1]};
  const ParamList params = toy.model.Params();
  const std::vector<Tensor> all = Tensors(params);
  std::string prefix = task == synth::Task::kSingleLabel ? "e2e_single/" : "e2e_multi/";
  if (closed_second) prefix = "e2e_fallback/";
  for (const auto& p : params) {
    Record(out, prefix + p.name,
           ParamGradCheck([&](Tape& t) { return EndToEndLoss(t, toy.model, ptrs, toy.noise); },
                          p.tensor, all));
  }
}

}  // namespace

double ParamGradCheck(const std::function<ad::Tensor(ad::Tape&)>& loss,
                      const ad::Tensor& param, const std::vector<ad::Tensor>& zero, double h) {
  for (const auto& z : zero) z.mutable_grad();
  for (auto z : zero) z.ZeroGrad();
  std::vector<double> analytic;
  {
    Tape tape;
    Tensor y = loss(tape);
    tape.Backward(y);
    analytic.assign(param.grad().begin(), param.grad().end());
  }
  for (auto z : zero) z.ZeroGrad();
  Tensor p = param;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double original = p.data()[i];
    p.mutable_data()[i] = original + h;
    double plus, minus;
    {
      Tape tape;
      plus = loss(tape).item();
    }
    p.mutable_data()[i] = original - h;
    {
      Tape tape;
      minus = loss(tape).item();
    }
    p.mutable_data()[i] = original;
    const double numeric = (plus - minus) / (2.0 * h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  for (auto z : zero) z.ZeroGrad();
  return worst;
}

std::vector<GradSuiteEntry> RunGradientSuite(std::uint64_t seed) {
  Rng rng(seed ^ 0x6a09e667f3bcc909ULL);
  std::vector<GradSuiteEntry> out;
  OperationChecks(out, rng);
  GatingChecks(out, rng);
  SelectorChecks(out, rng);
  ClassifierChecks(out, rng);
  EndToEndChecks(out, synth::Task::kSingleLabel, rng);
  EndToEndChecks(out, synth::Task::kMultiLabel, rng);
  EndToEndChecks(out, synth::Task::kSingleLabel, rng, true);
  return out;
}

}  // namespace timegate::harness
