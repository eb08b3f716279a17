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

#include "timegate/training.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "timegate/adam.h"
#include "timegate/dataset_io.h"
#include "timegate/errors.h"
#include "timegate/gating.h"

namespace timegate::harness {
namespace {

constexpr std::uint64_t kInitSalt = 0x5851f42d4c957f2dULL;
constexpr std::uint64_t kTrainSalt = 0x14057b7ef767814fULL;
constexpr std::uint64_t kRandomSalt = 0x2545f4914f6cdd1dULL;
constexpr std::size_t kChooseChunk = 64;

using VideoSpan = std::span<const synth::VideoSample* const>;

struct StepResult {
  ad::Tensor loss;
  double correct = 0.0;
  double count = 0.0;
  double open = 0.0;
  double gates = 0.0;
};

// Trains `params` with Adam over `epochs` passes of shuffled batches.
using StepFn = std::function<StepResult(ad::Tape&, VideoSpan, std::span<const std::size_t>,
                                        int epoch, Rng&)>;

void Shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = std::min(i - 1, static_cast<std::size_t>(OpenUniform(rng) * i));
    std::swap(v[i - 1], v[j]);
  }
}

double CountCorrect(const ad::Tensor& logits, VideoSpan videos) {
  const std::size_t classes = logits.dim(1);
  double correct = 0.0;
  for (std::size_t b = 0; b < videos.size(); ++b) {
    auto row = logits.data().subspan(b * classes, classes);
    const auto arg = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    correct += videos[b]->HasLabel(arg) ? 1.0 : 0.0;
  }
  return correct;
}

void RunPhase(Model& model, const std::string& phase, const ParamList& params,
              const synth::Dataset& train, Rng& rng, const StepFn& step,
              std::ostream* log) {
  const TrainConfig& tc = model.config.train;
  ad::Adam adam(Tensors(params), {tc.lr, tc.eps, tc.beta1, tc.beta2});
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(tc.batch_size);
  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    Shuffle(order, rng);
    EpochLog stats{phase, epoch, 0.0, 0.0, 1.0};
    double loss_sum = 0.0, correct = 0.0, count = 0.0, open = 0.0, gates = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::vector<const synth::VideoSample*> videos;
      std::vector<std::size_t> ids(order.begin() + static_cast<std::ptrdiff_t>(start),
                                   order.begin() + static_cast<std::ptrdiff_t>(end));
      for (std::size_t id : ids) videos.push_back(&train.videos[id]);
      ad::Tape tape;
      StepResult r = step(tape, videos, ids, epoch, rng);
      const double loss = r.loss.item();
      if (!std::isfinite(loss)) {
        throw DivergenceError(phase + " training diverged at epoch " + std::to_string(epoch) +
                              ", optimizer step " + std::to_string(adam.step_count()) +
                              ": loss = " + std::to_string(loss));
      }
      tape.Backward(r.loss);
      adam.Step();
      loss_sum += loss * static_cast<double>(videos.size());
      correct += r.correct;
      count += r.count;
      open += r.open;
      gates += r.gates;
    }
    stats.loss = loss_sum / static_cast<double>(train.size());
    stats.accuracy = count > 0 ? correct / count : 0.0;
    stats.selected_ratio = gates > 0 ? open / gates : 1.0;
    model.history.push_back(stats);
    if (log) {
      *log << phase << " epoch " << epoch + 1 << "/" << tc.epochs << " loss " << stats.loss
           << " acc " << stats.accuracy << " ratio " << stats.selected_ratio << "\n";
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    model.moments[params[i].name] = {adam.first_moments()[i], adam.second_moments()[i]};
  }
  model.step += adam.step_count();
}

std::vector<double> DrawNoise(std::size_t n, Rng& rng) {
  std::vector<double> noise(n);
  for (double& g : noise) g = gating::SampleGateNoise(rng);
  return noise;
}

std::vector<std::size_t> UniformOffsets(std::size_t batch, std::size_t timesteps) {
  std::vector<std::size_t> offsets(batch + 1);
  for (std::size_t b = 0; b <= batch; ++b) offsets[b] = b * timesteps;
  return offsets;
}

struct EndToEndForward {
  ad::Tensor loss;
  ad::Tensor logits;
  double open = 0.0;
};

EndToEndForward RunEndToEnd(ad::Tape& tape, const Model& model, VideoSpan videos,
                            std::span<const double> noise) {
  const selector::Selector& sel = *model.selector;
  const auto t = static_cast<std::size_t>(model.spec().timesteps);
  const std::size_t batch = videos.size();
  ad::Tensor x = selector::LightInput(videos, static_cast<std::size_t>(sel.config.segment_length));
  ad::Tensor alpha =
      selector::GateLogits(tape, sel, selector::LightFeatures(tape, sel, x, batch, t));
  gating::GateActivation act = gating::ActivateTrain(tape, alpha, noise);
  classifier::Selection selection;
  std::vector<std::size_t> rows;
  EndToEndForward out;
  std::vector<double> forced(batch * t, 0.0);
  bool any_forced = false;
  for (std::size_t b = 0; b < batch; ++b) {
    selection.videos.push_back(videos[b]);
    auto& idx = selection.indices.emplace_back();
    std::size_t best = 0;
    for (std::size_t i = 0; i < t; ++i) {
      const auto& d = act.decisions[b * t + i];
      if (d.open) idx.push_back(i);
      if (d.logit > act.decisions[b * t + best].logit) best = i;
    }
    out.open += static_cast<double>(idx.size());
    if (idx.empty()) {
      idx.push_back(best);
      forced[b * t + best] = 1.0;
      any_forced = true;
    }
    for (std::size_t i : idx) rows.push_back(b * t + i);
  }
  // A forced fallback gate carries its unclipped noisy sigmoid, so an empty
  // video still trains both the classifier and its strongest gate.
  ad::Tensor values = act.values;
  if (any_forced) {
    ad::Tensor soft = tape.Sigmoid(tape.AddConstant(alpha, noise));
    values = tape.Add(values, tape.Mul(soft, ad::Tensor({batch * t}, std::move(forced))));
  }
  ad::Tensor gates = tape.GatherRows(values, rows);
  ad::Tensor features = classifier::HeavyFeatures(tape, model.heavy, selection);
  out.logits = classifier::Classify(tape, model.head, features, gates, selection.Offsets());
  out.loss = tape.Add(classifier::TaskLoss(tape, out.logits, videos, model.spec().task),
                      gating::L0Penalty(tape, alpha, model.config.train.lambda));
  return out;
}

// Heavy classifier step on precomputed per-video timesteps.
StepResult HeavyStep(ad::Tape& tape, const Model& model, VideoSpan videos,
                     std::vector<std::vector<std::size_t>> indices) {
  classifier::Selection selection{{videos.begin(), videos.end()}, std::move(indices)};
  ad::Tensor features = classifier::HeavyFeatures(tape, model.heavy, selection);
  ad::Tensor logits =
      classifier::Classify(tape, model.head, features, ad::Tensor(), selection.Offsets());
  StepResult r;
  r.loss = classifier::TaskLoss(tape, logits, videos, model.spec().task);
  r.correct = CountCorrect(logits, videos);
  r.count = static_cast<double>(videos.size());
  return r;
}

ParamList HeavyParams(const Model& model) {
  ParamList params;
  AppendParams(params, "heavy", model.heavy.Params());
  AppendParams(params, "head", model.head.Params());
  return params;
}

void TrainHeavyOn(Model& model, const synth::Dataset& train,
                  const std::vector<std::vector<std::size_t>>& choices, Rng& rng,
                  std::ostream* log) {
  RunPhase(model, "heavy", HeavyParams(model), train, rng,
           [&](ad::Tape& tape, VideoSpan videos, std::span<const std::size_t> ids, int, Rng&) {
             std::vector<std::vector<std::size_t>> indices;
             for (std::size_t id : ids) indices.push_back(choices[id]);
             return HeavyStep(tape, model, videos, std::move(indices));
           },
           log);
}

std::vector<std::size_t> AllIds(std::size_t n) {
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

std::vector<const synth::VideoSample*> Pointers(const synth::Dataset& data) {
  std::vector<const synth::VideoSample*> out;
  for (const auto& v : data.videos) out.push_back(&v);
  return out;
}

std::vector<std::vector<std::size_t>> Indices(const std::vector<Choice>& choices) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& c : choices) out.push_back(c.indices);
  return out;
}

Model Prepare(const ExperimentConfig& config, const synth::Dataset& train) {
  if (train.size() == 0) throw DomainError("training split is empty");
  ExperimentConfig effective = config;
  effective.data.spec = train.spec;
  if (effective.model.segment_length > train.spec.frames_per_timestep) {
    throw DomainError("model.segment_length " + std::to_string(effective.model.segment_length) +
                      " exceeds the data's " + std::to_string(train.spec.frames_per_timestep) +
                      " frames per timestep");
  }
  return BuildModel(effective, train.spec);
}

}  // namespace

ParamList Model::Params() const {
  ParamList out;
  if (selector) AppendParams(out, "selector", selector->Params());
  if (light_head) AppendParams(out, "light_head", light_head->Params());
  if (scsampler) AppendParams(out, "scsampler", scsampler->Params());
  AppendParams(out, "heavy", heavy.Params());
  AppendParams(out, "head", head.Params());
  return out;
}

Datasets LoadOrGenerate(const ExperimentConfig& config) {
  if (!config.data.train_path.empty()) {
    Datasets d{synth::ReadDataset(config.data.train_path),
               synth::ReadDataset(config.data.test_path)};
    const auto& a = d.train.spec;
    const auto& b = d.test.spec;
    if (a.num_classes != b.num_classes || a.raw_dim != b.raw_dim ||
        a.timesteps != b.timesteps || a.frames_per_timestep != b.frames_per_timestep ||
        a.task != b.task) {
      throw DomainError("train and test datasets have incompatible specs");
    }
    return d;
  }
  synth::Splits s = synth::GenerateDataset(config.data.spec, config.data.n_train,
                                           config.data.n_test, config.seed);
  return {std::move(s.train), std::move(s.test)};
}

selector::SelectorConfig MakeSelectorConfig(const ExperimentConfig& config) {
  selector::SelectorConfig s;
  s.raw_dim = config.data.spec.raw_dim;
  s.light_hidden = config.model.light_hidden;
  s.channels = config.model.channels;
  s.num_kernels = config.model.num_kernels;
  s.gate_hidden = config.model.gate_hidden;
  s.context_mode = config.mode == TrainMode::kFrameConditioned
                       ? selector::ContextMode::kFrame
                       : selector::ContextMode::kContext;
  s.segment_length = config.model.segment_length;
  s.gate_bias = config.model.gate_bias;
  s.gate_init_scale = config.model.gate_init_scale;
  return s;
}

classifier::ClassifierConfig MakeClassifierConfig(const ExperimentConfig& config) {
  classifier::ClassifierConfig c;
  c.raw_dim = config.data.spec.raw_dim;
  c.segment_length = config.model.segment_length;
  c.heavy_hidden = config.model.heavy_hidden;
  c.channels = config.model.heavy_channels;
  c.height = config.model.height;
  c.width = config.model.width;
  c.head_hidden = config.model.head_hidden;
  c.num_classes = config.data.spec.num_classes;
  c.task = config.data.spec.task;
  return c;
}

Model BuildModel(const ExperimentConfig& config, const synth::ActivitySpec& spec) {
  Model model;
  model.config = config;
  model.config.data.spec = spec;
  Rng rng(config.seed ^ kInitSalt);
  const ModelConfig& m = config.model;
  if (UsesSelector(config.mode)) {
    model.selector = selector::Selector::Create(MakeSelectorConfig(model.config), rng);
  }
  if (config.mode == TrainMode::kStandalone) {
    model.light_head = classifier::Head::Create(m.channels, m.head_hidden, spec.num_classes, rng);
  }
  if (config.mode == TrainMode::kScSampler) {
    model.scsampler = baselines::ScSampler::Create(spec.raw_dim, m.light_hidden, m.channels,
                                                   spec.num_classes, m.segment_length, rng);
  }
  const classifier::ClassifierConfig cc = MakeClassifierConfig(model.config);
  model.heavy = classifier::HeavyNet::Create(cc, rng);
  model.head = classifier::Head::Create(cc.channels, cc.head_hidden, cc.num_classes, rng);
  return model;
}

std::vector<Choice> ChooseTimesteps(const Model& model, VideoSpan videos,
                                    std::span<const std::size_t> ids, int budget) {
  if (ids.size() != videos.size()) throw ContractError("choose_timesteps: ids and videos differ");
  const auto t = static_cast<std::size_t>(model.spec().timesteps);
  const TrainMode mode = model.config.mode;
  const std::size_t k = static_cast<std::size_t>(budget > 0 ? budget : model.config.train.budget);
  std::vector<Choice> out(videos.size());
  if (UsesSelector(mode)) {
    const selector::Selector& sel = *model.selector;
    for (std::size_t start = 0; start < videos.size(); start += kChooseChunk) {
      const std::size_t n = std::min(kChooseChunk, videos.size() - start);
      auto chunk = videos.subspan(start, n);
      ad::Tape tape;
      ad::Tensor x = selector::LightInput(chunk, static_cast<std::size_t>(sel.config.segment_length));
      ad::Tensor alpha =
          selector::GateLogits(tape, sel, selector::LightFeatures(tape, sel, x, n, t));
      auto results = selector::SplitSelections(gating::ActivateTest(alpha), n, t);
      for (std::size_t b = 0; b < n; ++b) {
        Choice& c = out[start + b];
        c.logits.assign(alpha.data().begin() + static_cast<std::ptrdiff_t>(b * t),
                        alpha.data().begin() + static_cast<std::ptrdiff_t>((b + 1) * t));
        c.open = results[b].selected_indices.size();
        c.indices = budget > 0 ? selector::TopKByLogit(c.logits, static_cast<std::size_t>(budget))
                               : selector::WithFallback(results[b]);
      }
    }
    return out;
  }
  for (std::size_t b = 0; b < videos.size(); ++b) {
    Choice& c = out[b];
    switch (mode) {
      case TrainMode::kScSampler:
        c.scores = baselines::ScoreVideo(*model.scsampler, *videos[b]);
        c.indices = baselines::SampleIndices(baselines::SampleMode::kTopK, t, k, c.scores);
        break;
      case TrainMode::kUniform:
        c.indices = baselines::SampleIndices(baselines::SampleMode::kUniform, t, k);
        break;
      default:
        c.indices = baselines::SampleIndices(baselines::SampleMode::kRandom, t, k, {},
                                             model.config.seed ^ kRandomSalt ^ ids[b]);
        break;
    }
    c.open = c.indices.size();
  }
  return out;
}

ad::Tensor EndToEndLoss(ad::Tape& tape, const Model& model, VideoSpan videos,
                        std::span<const double> noise) {
  if (!model.selector) throw ContractError("end-to-end loss needs a selector");
  return RunEndToEnd(tape, model, videos, noise).loss;
}

Model TrainEndToEnd(const ExperimentConfig& config, const synth::Dataset& train,
                    std::ostream* log) {
  if (config.mode != TrainMode::kEndToEnd && config.mode != TrainMode::kFrameConditioned) {
    throw ContractError("TrainEndToEnd called for mode " + ToString(config.mode));
  }
  Model model = Prepare(config, train);
  Rng rng(config.seed ^ kTrainSalt);
  const auto t = static_cast<std::size_t>(model.spec().timesteps);
  RunPhase(model, ToString(config.mode), model.Params(), train, rng,
           [&](ad::Tape& tape, VideoSpan videos, std::span<const std::size_t>, int, Rng& r) {
             std::vector<double> noise = DrawNoise(videos.size() * t, r);
             EndToEndForward f = RunEndToEnd(tape, model, videos, noise);
             StepResult s;
             s.loss = f.loss;
             s.correct = CountCorrect(f.logits, videos);
             s.count = static_cast<double>(videos.size());
             s.open = f.open;
             s.gates = static_cast<double>(videos.size() * t);
             return s;
           },
           log);
  return model;
}

Model TrainStandaloneSelector(const ExperimentConfig& config, const synth::Dataset& train,
                              std::ostream* log) {
  if (config.mode != TrainMode::kStandalone) {
    throw ContractError("TrainStandaloneSelector called for mode " + ToString(config.mode));
  }
  Model model = Prepare(config, train);
  Rng rng(config.seed ^ kTrainSalt);
  const auto t = static_cast<std::size_t>(model.spec().timesteps);
  ParamList params;
  AppendParams(params, "selector", model.selector->Params());
  AppendParams(params, "light_head", model.light_head->Params());
  RunPhase(model, "selector", params, train, rng,
           [&](ad::Tape& tape, VideoSpan videos, std::span<const std::size_t>, int, Rng& r) {
             const selector::Selector& sel = *model.selector;
             const std::size_t batch = videos.size();
             ad::Tensor x = selector::LightInput(
                 videos, static_cast<std::size_t>(sel.config.segment_length));
             ad::Tensor features = selector::LightFeatures(tape, sel, x, batch, t);
             ad::Tensor alpha = selector::GateLogits(tape, sel, features);
             gating::GateActivation act =
                 gating::ActivateTrain(tape, alpha, DrawNoise(batch * t, r));
             ad::Tensor logits = classifier::Classify(tape, *model.light_head, features,
                                                      act.values, UniformOffsets(batch, t));
             StepResult s;
             s.loss = tape.Add(classifier::TaskLoss(tape, logits, videos, model.spec().task),
                               gating::L0Penalty(tape, alpha, model.config.train.lambda));
             s.correct = CountCorrect(logits, videos);
             s.count = static_cast<double>(batch);
             for (const auto& d : act.decisions) s.open += d.open ? 1.0 : 0.0;
             s.gates = static_cast<double>(batch * t);
             return s;
           },
           log);
  const auto videos = Pointers(train);
  TrainHeavyOn(model, train,
               Indices(ChooseTimesteps(model, videos, AllIds(train.size()), config.train.budget)),
               rng, log);
  return model;
}

Model TrainScSampler(const ExperimentConfig& config, const synth::Dataset& train,
                     std::ostream* log) {
  if (config.mode != TrainMode::kScSampler) {
    throw ContractError("TrainScSampler called for mode " + ToString(config.mode));
  }
  Model model = Prepare(config, train);
  Rng rng(config.seed ^ kTrainSalt);
  const auto t = static_cast<std::size_t>(model.spec().timesteps);
  ParamList params;
  AppendParams(params, "scsampler", model.scsampler->Params());
  RunPhase(model, "scorer", params, train, rng,
           [&](ad::Tape& tape, VideoSpan videos, std::span<const std::size_t>, int, Rng&) {
             const baselines::ScSampler& scs = *model.scsampler;
             ad::Tensor logits = scs.Logits(tape, selector::LightInput(videos, scs.segment_length));
             const std::size_t classes = logits.dim(1);
             StepResult s;
             if (model.spec().task == synth::Task::kSingleLabel) {
               std::vector<int> labels;
               for (const auto* v : videos) labels.insert(labels.end(), t, v->label());
               s.loss = tape.SoftmaxCrossEntropy(logits, labels);
             } else {
               std::vector<double> targets;
               for (const auto* v : videos) {
                 auto row = v->Targets(static_cast<int>(classes));
                 for (std::size_t i = 0; i < t; ++i) targets.insert(targets.end(), row.begin(), row.end());
               }
               s.loss = tape.BceWithLogits(logits, targets);
             }
             for (std::size_t b = 0; b < videos.size(); ++b) {
               for (std::size_t i = 0; i < t; ++i) {
                 auto row = logits.data().subspan((b * t + i) * classes, classes);
                 const auto arg = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
                 s.correct += videos[b]->HasLabel(arg) ? 1.0 : 0.0;
               }
             }
             s.count = static_cast<double>(videos.size() * t);
             return s;
           },
           log);
  const auto videos = Pointers(train);
  TrainHeavyOn(model, train, Indices(ChooseTimesteps(model, videos, AllIds(train.size()), 0)),
               rng, log);
  return model;
}

Model TrainFixedSampler(const ExperimentConfig& config, const synth::Dataset& train,
                        std::ostream* log) {
  if (config.mode != TrainMode::kUniform && config.mode != TrainMode::kRandom) {
    throw ContractError("TrainFixedSampler called for mode " + ToString(config.mode));
  }
  Model model = Prepare(config, train);
  Rng rng(config.seed ^ kTrainSalt);
  const auto t = static_cast<std::size_t>(model.spec().timesteps);
  const auto k = static_cast<std::size_t>(config.train.budget);
  const baselines::SampleMode sample = config.mode == TrainMode::kUniform
                                           ? baselines::SampleMode::kUniform
                                           : baselines::SampleMode::kRandom;
  RunPhase(model, "heavy", HeavyParams(model), train, rng,
           [&](ad::Tape& tape, VideoSpan videos, std::span<const std::size_t> ids, int epoch, Rng&) {
             std::vector<std::vector<std::size_t>> indices;
             for (std::size_t id : ids) {
               // Fresh random draws each epoch.
               const std::uint64_t seed = config.seed ^ kRandomSalt ^
                                          (static_cast<std::uint64_t>(epoch + 1) << 40) ^ id;
               indices.push_back(baselines::SampleIndices(sample, t, k, {}, seed));
             }
             return HeavyStep(tape, model, videos, std::move(indices));
           },
           log);
  return model;
}

Model Train(const ExperimentConfig& config, const synth::Dataset& train, std::ostream* log) {
  switch (config.mode) {
    case TrainMode::kStandalone:
      return TrainStandaloneSelector(config, train, log);
    case TrainMode::kEndToEnd:
    case TrainMode::kFrameConditioned:
      return TrainEndToEnd(config, train, log);
    case TrainMode::kScSampler:
      return TrainScSampler(config, train, log);
    case TrainMode::kUniform:
    case TrainMode::kRandom:
      return TrainFixedSampler(config, train, log);
  }
  throw ContractError("unhandled mode");
}

Checkpoint ToCheckpoint(const Model& model) {
  Checkpoint ckpt;
  ckpt.config_json = ConfigToJson(model.config).dump();
  ckpt.step = model.step;
  for (const auto& p : model.Params()) {
    CheckpointTensor t;
    t.name = p.name;
    t.shape = p.tensor.shape();
    t.values.assign(p.tensor.data().begin(), p.tensor.data().end());
    auto it = model.moments.find(p.name);
    if (it != model.moments.end()) {
      t.first_moment = it->second.first;
      t.second_moment = it->second.second;
    }
    ckpt.tensors.push_back(std::move(t));
  }
  return ckpt;
}

Model FromCheckpoint(const Checkpoint& ckpt) {
  ExperimentConfig config;
  try {
    config = ConfigFromJson(nlohmann::json::parse(ckpt.config_json));
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("checkpoint config is not valid JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw LoadError(std::string("checkpoint config rejected: ") + e.what());
  }
  Model model = BuildModel(config, config.data.spec);
  const ParamList params = model.Params();
  if (params.size() != ckpt.tensors.size()) {
    throw LoadError("checkpoint holds " + std::to_string(ckpt.tensors.size()) +
                    " tensors, model expects " + std::to_string(params.size()));
  }
  for (const auto& p : params) {
    const CheckpointTensor& t = ckpt.Find(p.name);
    if (t.shape != p.tensor.shape()) {
      throw LoadError("checkpoint tensor '" + p.name + "' has shape " + ad::ShapeString(t.shape) +
                      ", model expects " + ad::ShapeString(p.tensor.shape()));
    }
    ad::Tensor target = p.tensor;
    std::copy(t.values.begin(), t.values.end(), target.mutable_data().begin());
    if (!t.first_moment.empty()) model.moments[p.name] = {t.first_moment, t.second_moment};
  }
  model.step = ckpt.step;
  return model;
}

}  // namespace timegate::harness
