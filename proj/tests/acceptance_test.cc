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

// Acceptance suite. Usage: acceptance_test <criterion 1-10 | all>. Prints one
// PASS/FAIL line per criterion and exits non-zero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "timegate/checkpoint.h"
#include "timegate/config.h"
#include "timegate/costmodel.h"
#include "timegate/dataset_io.h"
#include "timegate/evaluation.h"
#include "timegate/gating.h"
#include "timegate/gradsuite.h"
#include "timegate/selector.h"
#include "timegate/training.h"

namespace timegate {
namespace {

using harness::BudgetMetrics;
using harness::Datasets;
using harness::ExperimentConfig;
using harness::Model;
using harness::TrainMode;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fixed(double x, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard error of the mean.
double StandardError(const std::vector<double>& v) {
  const double m = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double n = static_cast<double>(v.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

constexpr int kSeeds = 5;

// Desk-scale experiment used by the trend criteria.
ExperimentConfig DeskConfig(std::uint64_t seed, TrainMode mode, double lambda) {
  ExperimentConfig c;
  c.seed = seed;
  c.mode = mode;
  c.data.n_train = 1000;
  c.data.n_test = 500;
  c.data.spec.frames_per_timestep = 4;
  c.model.segment_length = 4;
  c.train.epochs = 10;
  c.train.lambda = lambda;
  return c;
}

// Context-dependent set: class-dependent relevant durations and sibling
// confounders.
ExperimentConfig ContextConfig(std::uint64_t seed, TrainMode mode) {
  ExperimentConfig c = DeskConfig(seed, mode, 0.01);
  c.data.spec.relevant_spread = 0.6;
  c.data.spec.confounder_fraction = 0.5;
  c.model.gate_init_scale = 1.0;
  return c;
}

double SelectedRatio(const BudgetMetrics& m, const synth::Dataset& test) {
  return m.mean_selected / static_cast<double>(test.spec.timesteps);
}

Outcome GradientSuite() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::string worst_name;
  for (const auto& e : harness::RunGradientSuite(0)) {
    if (!(e.max_relative_error <= worst)) {
      worst = e.max_relative_error;
      worst_name = e.name;
    }
  }
  const double secs = Seconds(start);
  return {worst < 1e-4 && secs < 60.0,
          "max rel err " + Fixed(worst, 8) + " (" + worst_name + "), " + Fixed(secs, 2) + " s"};
}

Outcome GateProbability() {
  Rng rng(2024);
  Outcome out{true, ""};
  for (double alpha : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    constexpr int kDraws = 100000;
    int open = 0;
    for (int i = 0; i < kDraws; ++i) {
      open += gating::ActivateTrain(alpha, gating::SampleGateNoise(rng)).open;
    }
    const double freq = static_cast<double>(open) / kDraws;
    const double target = 1.0 / (1.0 + std::exp(-alpha));
    out.pass = out.pass && std::abs(freq - target) <= 0.02;
    out.detail += "a=" + Fixed(alpha, 0) + ":" + Fixed(freq, 4) + "/" + Fixed(target, 4) + " ";
  }
  return out;
}

Outcome TrainTestConsistency() {
  Rng rng(7);
  std::vector<double> logits = {0.0, -0.0, 1e-300, -1e-300, 5e-324, -5e-324};
  while (logits.size() < 10000) {
    const double scale = std::pow(10.0, 6.0 * OpenUniform(rng) - 4.0);
    logits.push_back((2.0 * OpenUniform(rng) - 1.0) * scale);
  }
  int mismatches = 0, open = 0;
  for (double l : logits) {
    const bool train_open = gating::ActivateTrain(l, 0.0).open;
    mismatches += train_open != gating::ActivateTest(l).open;
    open += train_open;
  }
  ad::Tensor batch({logits.size()}, logits);
  ad::Tape tape;
  const std::vector<double> zeros(logits.size(), 0.0);
  const auto train = gating::ActivateTrain(tape, batch, zeros);
  const auto test = gating::ActivateTest(batch);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    mismatches += train.decisions[i].open != test.decisions[i].open;
  }
  return {mismatches == 0, std::to_string(logits.size()) + " logits, " + std::to_string(open) +
                               " open, " + std::to_string(mismatches) + " mismatches"};
}

Outcome CostTable() {
  struct Cell {
    const char* name;
    int n_light, n_heavy;
    const char* heavy;
    const char* light;
    double total;
  };
  const std::vector<Cell> cells = {
      {"R2D 64", 0, 64, "R2D", cost::kLightPlusGating, 246.6},
      {"R2D+SCSampler", 128, 16, "R2D", cost::kScSamplerLight, 69.2},
      {"R2D+TimeGate", 128, 16, "R2D", cost::kLightPlusGating, 69.5},
      {"S3D 64", 0, 64, "S3D", cost::kLightPlusGating, 61.8},
      {"S3D+SCSampler", 128, 16, "S3D", cost::kScSamplerLight, 24.8},
      {"S3D+TimeGate", 128, 16, "S3D", cost::kLightPlusGating, 25.1},
      {"I3D 64", 0, 64, "I3D", cost::kLightPlusGating, 830.7},
      {"I3D+SCSampler", 128, 16, "I3D", cost::kScSamplerLight, 215.3},
      {"I3D+TimeGate", 128, 16, "I3D", cost::kLightPlusGating, 215.6}};
  const cost::CostRegistry registry = cost::CostRegistry::Published();
  Outcome out{true, ""};
  for (const Cell& c : cells) {
    const double got =
        cost::PipelineCost(c.n_light, c.n_heavy, c.heavy, registry, c.light).total_gflops;
    if (std::abs(got - c.total) > 0.15) {
      out.pass = false;
      out.detail += std::string(c.name) + " " + Fixed(got, 1) + " vs " + Fixed(c.total, 1) + "; ";
    }
  }
  if (out.pass) out.detail = "9/9 cells within 0.15 GFLOP";
  return out;
}

Outcome SparsityBehavior() {
  const auto start = Clock::now();
  const std::vector<double> lambdas = {0.0, 0.1, 1.0, 10.0};
  std::vector<double> ratio(lambdas.size()), acc(lambdas.size());
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    std::vector<double> r, a;
    for (int s = 1; s <= kSeeds; ++s) {
      const ExperimentConfig c = DeskConfig(s, TrainMode::kEndToEnd, lambdas[li]);
      const Datasets d = harness::LoadOrGenerate(c);
      const Model m = harness::Train(c, d.train);
      const BudgetMetrics b = harness::EvaluateBudget(m, d.test, 0);
      r.push_back(SelectedRatio(b, d.test));
      a.push_back(b.metric);
    }
    ratio[li] = Mean(r);
    acc[li] = Mean(a);
  }
  bool sparse_match = false, monotone = true;
  std::string detail;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    detail += "l=" + Fixed(lambdas[li], 1) + " ratio " + Fixed(ratio[li], 3) + " acc " +
              Fixed(acc[li], 3) + "; ";
    // Accuracies are multiples of 1/n_test; the slack absorbs only rounding.
    sparse_match = sparse_match || (ratio[li] <= 0.5 && acc[li] >= acc[0] - 0.02 - 1e-12);
    if (li > 0) monotone = monotone && ratio[li] <= ratio[li - 1];
  }
  const double secs = Seconds(start);
  detail += Fixed(secs, 0) + " s";
  return {ratio[0] > 0.9 && sparse_match && monotone && secs < 1800.0, detail};
}

Outcome ConditioningTrend() {
  std::vector<double> vs_frame, vs_sc;
  int variance_wins = 0;
  std::string detail;
  for (int s = 1; s <= kSeeds; ++s) {
    const ExperimentConfig cc = ContextConfig(s, TrainMode::kEndToEnd);
    const Datasets d = harness::LoadOrGenerate(cc);
    const Model context = harness::Train(cc, d.train);
    const BudgetMetrics own = harness::EvaluateBudget(context, d.test, 0);
    const int k = static_cast<int>(std::ceil(own.mean_selected));

    const ExperimentConfig fc = ContextConfig(s, TrainMode::kFrameConditioned);
    const Model frame = harness::Train(fc, d.train);
    const double frame_acc = harness::EvaluateBudget(frame, d.test, k).metric;

    ExperimentConfig sc = ContextConfig(s, TrainMode::kScSampler);
    sc.train.budget = k;
    const Model sampler = harness::Train(sc, d.train);
    const double sc_acc = harness::EvaluateBudget(sampler, d.test, k).metric;

    const double var_context = harness::MakeGatingReport(context, d.test).ratio_variance;
    const double var_frame = harness::MakeGatingReport(frame, d.test).ratio_variance;
    variance_wins += var_context > var_frame;
    vs_frame.push_back(own.metric - frame_acc);
    vs_sc.push_back(own.metric - sc_acc);
    detail += "s" + std::to_string(s) + " k=" + std::to_string(k) + " ctx " + Fixed(own.metric, 3) +
              " frame " + Fixed(frame_acc, 3) + " sc " + Fixed(sc_acc, 3) + " var " +
              Fixed(var_context, 4) + "/" + Fixed(var_frame, 4) + "; ";
  }
  const bool beats_frame = Mean(vs_frame) > StandardError(vs_frame);
  const bool beats_sc = Mean(vs_sc) > StandardError(vs_sc);
  detail += "margin frame " + Fixed(Mean(vs_frame), 3) + " (se " + Fixed(StandardError(vs_frame), 3) +
            "), sc " + Fixed(Mean(vs_sc), 3) + " (se " + Fixed(StandardError(vs_sc), 3) +
            "), variance wins " + std::to_string(variance_wins) + "/5";
  return {beats_frame && beats_sc && variance_wins >= 4, detail};
}

Outcome EndToEndVsStandalone() {
  std::vector<double> e2e, standalone;
  std::string detail;
  for (int s = 1; s <= kSeeds; ++s) {
    const ExperimentConfig ec = DeskConfig(s, TrainMode::kEndToEnd, 0.1);
    const Datasets d = harness::LoadOrGenerate(ec);
    const Model joint = harness::Train(ec, d.train);
    const int k =
        static_cast<int>(std::ceil(harness::EvaluateBudget(joint, d.test, 0).mean_selected));
    const ExperimentConfig sc = DeskConfig(s, TrainMode::kStandalone, 0.1);
    const Model alone = harness::Train(sc, d.train);
    e2e.push_back(harness::EvaluateBudget(joint, d.test, k).metric);
    standalone.push_back(harness::EvaluateBudget(alone, d.test, k).metric);
    detail += "s" + std::to_string(s) + " k=" + std::to_string(k) + " " + Fixed(e2e.back(), 3) +
              "/" + Fixed(standalone.back(), 3) + "; ";
  }
  detail += "mean " + Fixed(Mean(e2e), 4) + " vs " + Fixed(Mean(standalone), 4);
  return {Mean(e2e) >= Mean(standalone), detail};
}

Outcome EfficiencyInvariant() {
  Outcome out{true, ""};
  for (TrainMode mode : {TrainMode::kEndToEnd, TrainMode::kStandalone, TrainMode::kScSampler,
                         TrainMode::kUniform}) {
    ExperimentConfig c = DeskConfig(11, mode, 0.1);
    c.data.n_train = 200;
    c.data.n_test = 100;
    c.train.epochs = 2;
    c.train.budget = 6;
    const Datasets d = harness::LoadOrGenerate(c);
    const Model m = harness::Train(c, d.train);
    std::vector<const synth::VideoSample*> videos;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < d.test.size(); ++i) {
      videos.push_back(&d.test.videos[i]);
      ids.push_back(i);
    }
    for (int budget : {0, 3}) {
      std::int64_t selected = 0;
      for (const auto& choice : harness::ChooseTimesteps(m, videos, ids, budget)) {
        selected += static_cast<std::int64_t>(choice.indices.size());
      }
      const BudgetMetrics b = harness::EvaluateBudget(m, d.test, budget);
      out.pass = out.pass && b.heavy_invocations == selected && d.test.size() == 100;
      out.detail += harness::ToString(mode) + "@" + std::to_string(budget) + " " +
                    std::to_string(b.heavy_invocations) + "/" + std::to_string(selected) + " ";
    }
  }
  return out;
}

Outcome Alignment() {
  int checked = 0, wrong = 0;
  for (std::size_t m : {8u, 16u}) {
    constexpr std::size_t kStarts = 64;
    const auto light = selector::AlignTimesteps(kStarts, m, 1, kStarts + m);
    for (std::size_t j = 0; j < kStarts; ++j) {
      ++checked;
      wrong += light[j] != j + m / 2;
    }
  }
  return {wrong == 0, std::to_string(checked) + " starts, " + std::to_string(wrong) + " wrong"};
}

std::string FileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome DeterminismAndPersistence() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tg_acceptance_persist";
  fs::create_directories(dir);
  ExperimentConfig c = DeskConfig(21, TrainMode::kEndToEnd, 0.1);
  c.data.n_train = 200;
  c.data.n_test = 100;
  c.train.epochs = 2;
  const Datasets d1 = harness::LoadOrGenerate(c), d2 = harness::LoadOrGenerate(c);
  const Model a = harness::Train(c, d1.train), b = harness::Train(c, d2.train);
  const harness::MetricsTable ta = harness::Evaluate(a, d1.test, {0, 4}, harness::SelectionMode::kTopK);
  const harness::MetricsTable tb = harness::Evaluate(b, d2.test, {0, 4}, harness::SelectionMode::kTopK);
  std::ostringstream ma, mb;
  harness::WriteMetricsCsv(ma, ta);
  harness::WriteMetricsCsv(mb, tb);
  const bool runs = ma.str() == mb.str();

  const std::string p1 = (dir / "a.tgck").string(), p2 = (dir / "b.tgck").string();
  const harness::Checkpoint ck = harness::ToCheckpoint(a);
  harness::SaveCheckpoint(ck, p1);
  const harness::Checkpoint loaded = harness::LoadCheckpoint(p1);
  const Model restored = harness::FromCheckpoint(loaded);
  harness::SaveCheckpoint(harness::ToCheckpoint(restored), p2);
  std::ostringstream mr;
  harness::WriteMetricsCsv(mr, harness::Evaluate(restored, d1.test, {0, 4},
                                                 harness::SelectionMode::kTopK));
  const bool checkpoint = loaded == ck && FileBytes(p1) == FileBytes(p2) && mr.str() == ma.str();

  const std::string q1 = (dir / "a.tgds").string(), q2 = (dir / "b.tgds").string();
  synth::WriteDataset(d1.test, q1);
  const synth::Dataset back = synth::ReadDataset(q1);
  synth::WriteDataset(back, q2);
  bool dataset = FileBytes(q1) == FileBytes(q2) && back.size() == d1.test.size() &&
                 back.prototype_vectors == d1.test.prototype_vectors;
  for (std::size_t i = 0; dataset && i < back.size(); ++i) {
    const auto &x = back.videos[i], &y = d1.test.videos[i];
    dataset = x.frames == y.frames && x.labels == y.labels && x.relevance == y.relevance &&
              x.prototypes == y.prototypes;
  }
  fs::remove_all(dir);
  return {runs && checkpoint && dataset, std::string("runs ") + (runs ? "identical" : "differ") +
                                             ", checkpoint " + (checkpoint ? "exact" : "differs") +
                                             ", dataset " + (dataset ? "exact" : "differs")};
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& Criteria() {
  static const auto* table = new std::map<int, std::pair<std::string, std::function<Outcome()>>>{
      {1, {"gradient suite", GradientSuite}},
      {2, {"gate probability identity", GateProbability}},
      {3, {"train/test consistency", TrainTestConsistency}},
      {4, {"cost table reproduction", CostTable}},
      {5, {"sparsity behavior", SparsityBehavior}},
      {6, {"conditioning trend", ConditioningTrend}},
      {7, {"end-to-end vs stand-alone", EndToEndVsStandalone}},
      {8, {"efficiency invariant", EfficiencyInvariant}},
      {9, {"alignment", Alignment}},
      {10, {"determinism and persistence", DeterminismAndPersistence}}};
  return *table;
}

}  // namespace
}  // namespace timegate

int main(int argc, char** argv) {
  const auto& criteria = timegate::Criteria();
  std::vector<int> which;
  const std::string arg = argc > 1 ? argv[1] : "all";
  if (arg == "all") {
    for (const auto& [id, entry] : criteria) which.push_back(id);
  } else {
    const int id = std::atoi(arg.c_str());
    if (!criteria.count(id)) {
      std::cerr << "usage: acceptance_test <1-10|all>\n";
      return 2;
    }
    which.push_back(id);
  }
  bool all = true;
  for (int id : which) {
    const auto& [name, run] = criteria.at(id);
    timegate::Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << id << " (" << name << "): " << (out.pass ? "PASS" : "FAIL")
              << " | " << out.detail << std::endl;
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
