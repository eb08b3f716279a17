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

#ifndef TIMEGATE_HARNESS_CONFIG_H_
#define TIMEGATE_HARNESS_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "timegate/synthdata.h"

namespace timegate::harness {

enum class TrainMode {
  kStandalone,
  kEndToEnd,
  kFrameConditioned,
  kScSampler,
  kUniform,
  kRandom,
};

enum class SelectionMode { kGateCount, kTopK };

struct DataConfig {
  // Dataset files; when empty the data is generated from `spec`.
  std::string train_path;
  std::string test_path;
  synth::ActivitySpec spec = synth::DefaultSpec();
  int n_train = 2000;
  int n_test = 500;
};

struct ModelConfig {
  int light_hidden = 64;
  int channels = 32;        // C
  int num_kernels = 128;    // N
  int gate_hidden = 64;     // H_g
  int heavy_hidden = 64;
  int heavy_channels = 32;  // C'
  int height = 1;
  int width = 1;
  int head_hidden = 256;
  int segment_length = 16;  // M
  double gate_bias = 3.0;
  double gate_init_scale = 0.3;
};

struct TrainConfig {
  int batch_size = 32;
  int epochs = 30;
  double lr = 1e-3;
  double eps = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double lambda = 0.0;
  // Heavy timesteps per video for the sampler baselines and for the heavy
  // classifier of the stand-alone pipeline; 0 uses the selector's own gates.
  int budget = 0;
};

struct EvalConfig {
  // Heavy timesteps per video; 0 means the selector's own gate count.
  std::vector<int> budgets = {0};
  SelectionMode selection = SelectionMode::kGateCount;
};

struct CostConfig {
  std::string heavy_model = "desk_heavy";
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::kEndToEnd;
  DataConfig data;
  ModelConfig model;
  TrainConfig train;
  EvalConfig eval;
  CostConfig cost;

  // Checks value ranges; throws DomainError.
  void Validate() const;
};

// Strict parse: unknown keys and wrong types raise DomainError. A top-level
// "preset" of "desk" (30 epochs) or "full" (100 epochs) sets defaults that
// explicit keys override.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);
nlohmann::json ConfigToJson(const ExperimentConfig& config);
ExperimentConfig LoadConfig(const std::string& path);

std::string ToString(TrainMode mode);
TrainMode TrainModeFromString(const std::string& name);
std::string ToString(SelectionMode mode);
SelectionMode SelectionModeFromString(const std::string& name);
bool UsesSelector(TrainMode mode);

}  // namespace timegate::harness

#endif  // TIMEGATE_HARNESS_CONFIG_H_
