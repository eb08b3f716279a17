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

#ifndef TIMEGATE_TRAINING_H_
#define TIMEGATE_TRAINING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "timegate/baselines.h"
#include "timegate/checkpoint.h"
#include "timegate/classifier.h"
#include "timegate/config.h"
#include "timegate/params.h"
#include "timegate/selector.h"
#include "timegate/synthdata.h"

namespace timegate::harness {

struct EpochLog {
  std::string phase;
  int epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
  // Fraction of open gates seen in training; 1 for phases without gates.
  double selected_ratio = 1.0;
};

struct Moments {
  std::vector<double> first;
  std::vector<double> second;
};

// Every trainable piece of one experiment. Which optional members exist
// depends on the mode.
struct Model {
  ExperimentConfig config;  // data.spec always holds the training data's spec
  std::optional<selector::Selector> selector;
  std::optional<classifier::Head> light_head;  // stand-alone selector head
  std::optional<baselines::ScSampler> scsampler;
  classifier::HeavyNet heavy;
  classifier::Head head;
  std::map<std::string, Moments> moments;
  std::int64_t step = 0;
  std::vector<EpochLog> history;

  ParamList Params() const;
  const synth::ActivitySpec& spec() const { return config.data.spec; }
};

struct Datasets {
  synth::Dataset train;
  synth::Dataset test;
};

// Reads the configured files, or generates both splits from data.spec with
// the experiment seed.
Datasets LoadOrGenerate(const ExperimentConfig& config);

selector::SelectorConfig MakeSelectorConfig(const ExperimentConfig& config);
classifier::ClassifierConfig MakeClassifierConfig(const ExperimentConfig& config);

// Freshly initialized model for the config and data spec.
Model BuildModel(const ExperimentConfig& config, const synth::ActivitySpec& spec);

// Dispatches on config.mode. `log`, when given, receives one line per epoch.
Model Train(const ExperimentConfig& config, const synth::Dataset& train,
            std::ostream* log = nullptr);

// Selector with its own light head and L0 penalty, then a heavy classifier
// trained on the frozen selector's choices.
Model TrainStandaloneSelector(const ExperimentConfig& config,
                              const synth::Dataset& train, std::ostream* log = nullptr);
// Selector and classifier trained jointly; also the frame-conditioned
// ablation when config.mode says so.
Model TrainEndToEnd(const ExperimentConfig& config, const synth::Dataset& train,
                    std::ostream* log = nullptr);
// Segment-only scorer, then a heavy classifier on its top-k timesteps.
Model TrainScSampler(const ExperimentConfig& config, const synth::Dataset& train,
                     std::ostream* log = nullptr);
// Heavy classifier on uniform or random timesteps.
Model TrainFixedSampler(const ExperimentConfig& config, const synth::Dataset& train,
                        std::ostream* log = nullptr);

// Test-time timesteps of one video.
struct Choice {
  std::vector<std::size_t> indices;  // ascending, fed to the heavy encoder
  std::size_t open = 0;              // gates open on their own (selector modes)
  std::vector<double> logits;        // gating logits (selector modes)
  std::vector<double> scores;        // saliency scores (scsampler)
};

// budget 0 uses the selector's own gates (with the empty-selection fallback)
// or, for the sampler baselines, train.budget; budget k > 0 takes exactly k
// timesteps (top-k by gate logit or saliency, or k uniform/random ones).
// `ids` seed the random sampler per video.
std::vector<Choice> ChooseTimesteps(const Model& model,
                                    std::span<const synth::VideoSample* const> videos,
                                    std::span<const std::size_t> ids, int budget);

// Loss of the end-to-end objective (task loss plus L0 penalty) on a batch,
// with the given gate noise (one value per timestep of the batch).
ad::Tensor EndToEndLoss(ad::Tape& tape, const Model& model,
                        std::span<const synth::VideoSample* const> videos,
                        std::span<const double> noise);

Checkpoint ToCheckpoint(const Model& model);
Model FromCheckpoint(const Checkpoint& ckpt);

}  // namespace timegate::harness

#endif  // TIMEGATE_TRAINING_H_
