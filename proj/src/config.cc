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

#include "timegate/config.h"

#include <fstream>
#include <set>

#include "timegate/dataset_io.h"
#include "timegate/errors.h"

namespace timegate::harness {
namespace {

using nlohmann::json;

void RejectUnknown(const json& j, const std::string& where,
                   const std::set<std::string>& keys) {
  if (!j.is_object()) throw DomainError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) {
      throw DomainError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DomainError(where + "." + key + " has the wrong type");
  }
}

void RequirePositive(int v, const std::string& name) {
  if (v < 1) throw DomainError(name + " must be >= 1");
}

}  // namespace

void ExperimentConfig::Validate() const {
  data.spec.Validate();
  if (data.n_train < 1 || data.n_test < 1) throw DomainError("data sizes must be >= 1");
  RequirePositive(model.light_hidden, "model.light_hidden");
  RequirePositive(model.channels, "model.channels");
  RequirePositive(model.num_kernels, "model.num_kernels");
  RequirePositive(model.gate_hidden, "model.gate_hidden");
  RequirePositive(model.heavy_hidden, "model.heavy_hidden");
  RequirePositive(model.heavy_channels, "model.heavy_channels");
  RequirePositive(model.height, "model.height");
  RequirePositive(model.width, "model.width");
  RequirePositive(model.head_hidden, "model.head_hidden");
  RequirePositive(model.segment_length, "model.segment_length");
  if (!(model.gate_init_scale >= 0.0)) throw DomainError("model.gate_init_scale must be >= 0");
  if (data.train_path.empty() &&
      model.segment_length > data.spec.frames_per_timestep) {
    throw DomainError("model.segment_length exceeds data frames_per_timestep");
  }
  RequirePositive(train.batch_size, "train.batch_size");
  if (train.epochs < 0) throw DomainError("train.epochs must be >= 0");
  if (!(train.lr > 0.0) || !(train.eps > 0.0)) throw DomainError("train.lr and train.eps must be > 0");
  if (!(train.beta1 >= 0.0 && train.beta1 < 1.0 && train.beta2 >= 0.0 && train.beta2 < 1.0)) {
    throw DomainError("train betas must be in [0, 1)");
  }
  if (!(train.lambda >= 0.0)) throw DomainError("train.lambda must be >= 0");
  if (train.budget < 0) throw DomainError("train.budget must be >= 0");
  if (!UsesSelector(mode) && train.budget == 0) {
    throw DomainError("mode " + ToString(mode) + " needs train.budget >= 1");
  }
  if (eval.budgets.empty()) throw DomainError("eval.budgets is empty");
  std::set<int> seen;
  for (int b : eval.budgets) {
    if (b < 0) throw DomainError("eval budgets must be >= 0");
    if (!seen.insert(b).second) throw DomainError("eval budgets must be distinct");
  }
}

ExperimentConfig ConfigFromJson(const json& j) {
  RejectUnknown(j, "config", {"preset", "seed", "mode", "data", "model", "train", "eval", "cost"});
  ExperimentConfig c;
  std::string preset = "desk";
  Read(j, "preset", preset, "config");
  if (preset == "full") {
    c.train.epochs = 100;
  } else if (preset != "desk") {
    throw DomainError("unknown preset '" + preset + "'");
  }
  Read(j, "seed", c.seed, "config");
  if (j.contains("mode")) {
    std::string mode;
    Read(j, "mode", mode, "config");
    c.mode = TrainModeFromString(mode);
  }
  if (j.contains("data")) {
    const json& d = j.at("data");
    RejectUnknown(d, "data", {"train", "test", "spec", "n_train", "n_test"});
    Read(d, "train", c.data.train_path, "data");
    Read(d, "test", c.data.test_path, "data");
    Read(d, "n_train", c.data.n_train, "data");
    Read(d, "n_test", c.data.n_test, "data");
    if (c.data.train_path.empty() != c.data.test_path.empty()) {
      throw DomainError("data.train and data.test must be given together");
    }
    if (d.contains("spec")) c.data.spec = synth::SpecFromJson(d.at("spec"));
  }
  if (j.contains("model")) {
    const json& m = j.at("model");
    RejectUnknown(m, "model",
                  {"light_hidden", "channels", "num_kernels", "gate_hidden", "heavy_hidden",
                   "heavy_channels", "height", "width", "head_hidden", "segment_length",
                   "gate_bias", "gate_init_scale"});
    Read(m, "light_hidden", c.model.light_hidden, "model");
    Read(m, "channels", c.model.channels, "model");
    Read(m, "num_kernels", c.model.num_kernels, "model");
    Read(m, "gate_hidden", c.model.gate_hidden, "model");
    Read(m, "heavy_hidden", c.model.heavy_hidden, "model");
    Read(m, "heavy_channels", c.model.heavy_channels, "model");
    Read(m, "height", c.model.height, "model");
    Read(m, "width", c.model.width, "model");
    Read(m, "head_hidden", c.model.head_hidden, "model");
    Read(m, "segment_length", c.model.segment_length, "model");
    Read(m, "gate_bias", c.model.gate_bias, "model");
    Read(m, "gate_init_scale", c.model.gate_init_scale, "model");
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    RejectUnknown(t, "train",
                  {"batch_size", "epochs", "lr", "eps", "beta1", "beta2", "lambda", "budget"});
    Read(t, "batch_size", c.train.batch_size, "train");
    Read(t, "epochs", c.train.epochs, "train");
    Read(t, "lr", c.train.lr, "train");
    Read(t, "eps", c.train.eps, "train");
    Read(t, "beta1", c.train.beta1, "train");
    Read(t, "beta2", c.train.beta2, "train");
    Read(t, "lambda", c.train.lambda, "train");
    Read(t, "budget", c.train.budget, "train");
  }
  if (j.contains("eval")) {
    const json& e = j.at("eval");
    RejectUnknown(e, "eval", {"budgets", "selection"});
    Read(e, "budgets", c.eval.budgets, "eval");
    if (e.contains("selection")) {
      std::string s;
      Read(e, "selection", s, "eval");
      c.eval.selection = SelectionModeFromString(s);
    }
  }
  if (j.contains("cost")) {
    const json& k = j.at("cost");
    RejectUnknown(k, "cost", {"heavy_model"});
    Read(k, "heavy_model", c.cost.heavy_model, "cost");
  }
  c.Validate();
  return c;
}

json ConfigToJson(const ExperimentConfig& c) {
  json data = {{"n_train", c.data.n_train},
               {"n_test", c.data.n_test},
               {"spec", synth::SpecToJson(c.data.spec)}};
  if (!c.data.train_path.empty()) {
    data["train"] = c.data.train_path;
    data["test"] = c.data.test_path;
  }
  return {
      {"seed", c.seed},
      {"mode", ToString(c.mode)},
      {"data", data},
      {"model",
       {{"light_hidden", c.model.light_hidden},
        {"channels", c.model.channels},
        {"num_kernels", c.model.num_kernels},
        {"gate_hidden", c.model.gate_hidden},
        {"heavy_hidden", c.model.heavy_hidden},
        {"heavy_channels", c.model.heavy_channels},
        {"height", c.model.height},
        {"width", c.model.width},
        {"head_hidden", c.model.head_hidden},
        {"segment_length", c.model.segment_length},
        {"gate_bias", c.model.gate_bias},
        {"gate_init_scale", c.model.gate_init_scale}}},
      {"train",
       {{"batch_size", c.train.batch_size},
        {"epochs", c.train.epochs},
        {"lr", c.train.lr},
        {"eps", c.train.eps},
        {"beta1", c.train.beta1},
        {"beta2", c.train.beta2},
        {"lambda", c.train.lambda},
        {"budget", c.train.budget}}},
      {"eval", {{"budgets", c.eval.budgets}, {"selection", ToString(c.eval.selection)}}},
      {"cost", {{"heavy_model", c.cost.heavy_model}}},
  };
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError("config " + path + " is not valid JSON: " + e.what());
  }
  return ConfigFromJson(j);
}

std::string ToString(TrainMode mode) {
  switch (mode) {
    case TrainMode::kStandalone:
      return "standalone";
    case TrainMode::kEndToEnd:
      return "e2e";
    case TrainMode::kFrameConditioned:
      return "frame_conditioned";
    case TrainMode::kScSampler:
      return "scsampler";
    case TrainMode::kUniform:
      return "uniform";
    case TrainMode::kRandom:
      return "random";
  }
  return "unknown";
}

TrainMode TrainModeFromString(const std::string& name) {
  for (TrainMode m : {TrainMode::kStandalone, TrainMode::kEndToEnd,
                      TrainMode::kFrameConditioned, TrainMode::kScSampler,
                      TrainMode::kUniform, TrainMode::kRandom}) {
    if (ToString(m) == name) return m;
  }
  throw DomainError("unknown mode '" + name + "'");
}

std::string ToString(SelectionMode mode) {
  return mode == SelectionMode::kTopK ? "topk" : "gate_count";
}

SelectionMode SelectionModeFromString(const std::string& name) {
  if (name == "topk") return SelectionMode::kTopK;
  if (name == "gate_count") return SelectionMode::kGateCount;
  throw DomainError("unknown selection mode '" + name + "'");
}

bool UsesSelector(TrainMode mode) {
  return mode == TrainMode::kStandalone || mode == TrainMode::kEndToEnd ||
         mode == TrainMode::kFrameConditioned;
}

}  // namespace timegate::harness
