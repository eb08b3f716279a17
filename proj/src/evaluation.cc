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

#include "timegate/evaluation.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <numeric>
#include <sstream>

#include "timegate/errors.h"

namespace timegate::harness {
namespace {

constexpr std::size_t kEvalChunk = 64;

bool IsDesk(const std::string& tag) { return tag.rfind("desk_", 0) == 0; }

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

}  // namespace

double AveragePrecision(std::span<const double> scores, std::span<const double> targets) {
  if (scores.size() != targets.size()) {
    throw DimensionError("average_precision: scores and targets differ in length");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double hits = 0.0, sum = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (targets[order[rank]] > 0.5) {
      hits += 1.0;
      sum += hits / static_cast<double>(rank + 1);
    }
  }
  if (hits == 0.0) throw DomainError("average_precision: no positive example");
  return sum / hits;
}

MapResult MeanAveragePrecision(std::span<const double> scores, std::span<const double> targets,
                               std::size_t classes) {
  if (classes == 0 || scores.size() != targets.size() || scores.size() % classes != 0) {
    throw DimensionError("mean_average_precision: inconsistent sizes");
  }
  const std::size_t n = scores.size() / classes;
  MapResult result;
  double sum = 0.0;
  int used = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<double> s(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = scores[i * classes + c];
      t[i] = targets[i * classes + c];
    }
    if (std::none_of(t.begin(), t.end(), [](double v) { return v > 0.5; })) {
      result.skipped_classes.push_back(static_cast<int>(c));
      continue;
    }
    sum += AveragePrecision(s, t);
    ++used;
  }
  result.map = used > 0 ? sum / used : 0.0;
  return result;
}

cost::CostRegistry RegistryFor(const Model& model) {
  cost::CostRegistry registry = cost::CostRegistry::Published();
  if (model.selector) {
    registry.AddDeskModels(model.selector->config, MakeClassifierConfig(model.config),
                           model.spec().timesteps);
  } else {
    registry.AddDeskModels(MakeSelectorConfig(model.config), MakeClassifierConfig(model.config),
                           model.spec().timesteps);
  }
  return registry;
}

BudgetMetrics EvaluateBudget(const Model& model, const synth::Dataset& test, int budget,
                             std::vector<std::string>* warnings) {
  if (test.size() == 0) throw DomainError("evaluation split is empty");
  if (test.spec.num_classes != model.spec().num_classes || test.spec.task != model.spec().task) {
    throw DomainError("evaluation data does not match the model's task");
  }
  std::vector<const synth::VideoSample*> videos;
  for (const auto& v : test.videos) videos.push_back(&v);
  std::vector<std::size_t> ids(videos.size());
  std::iota(ids.begin(), ids.end(), 0);
  const std::vector<Choice> choices = ChooseTimesteps(model, videos, ids, budget);

  BudgetMetrics m;
  m.budget = budget;
  m.selection = budget > 0 ? "topk" : "gate_count";
  const auto classes = static_cast<std::size_t>(model.spec().num_classes);
  std::vector<double> logits;
  model.heavy.invocations = 0;
  for (std::size_t start = 0; start < videos.size(); start += kEvalChunk) {
    const std::size_t end = std::min(videos.size(), start + kEvalChunk);
    classifier::Selection selection;
    for (std::size_t i = start; i < end; ++i) {
      selection.videos.push_back(videos[i]);
      selection.indices.push_back(choices[i].indices);
      m.expected_invocations += static_cast<std::int64_t>(choices[i].indices.size());
    }
    ad::Tape tape;
    ad::Tensor features = classifier::HeavyFeatures(tape, model.heavy, selection);
    ad::Tensor out =
        classifier::Classify(tape, model.head, features, ad::Tensor(), selection.Offsets());
    logits.insert(logits.end(), out.data().begin(), out.data().end());
  }
  m.heavy_invocations = model.heavy.invocations;

  double selected = 0.0, open = 0.0;
  for (const Choice& c : choices) {
    selected += static_cast<double>(c.indices.size());
    open += static_cast<double>(c.open);
  }
  m.mean_selected = selected / static_cast<double>(videos.size());
  m.mean_open = open / static_cast<double>(videos.size());

  if (model.spec().task == synth::Task::kSingleLabel) {
    m.metric_name = "accuracy";
    double correct = 0.0;
    for (std::size_t b = 0; b < videos.size(); ++b) {
      auto row = std::span<const double>(logits).subspan(b * classes, classes);
      const auto arg = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
      correct += arg == videos[b]->label() ? 1.0 : 0.0;
    }
    m.metric = correct / static_cast<double>(videos.size());
  } else {
    m.metric_name = "mAP";
    std::vector<double> targets;
    for (const auto* v : videos) {
      auto t = v->Targets(static_cast<int>(classes));
      targets.insert(targets.end(), t.begin(), t.end());
    }
    MapResult r = MeanAveragePrecision(logits, targets, classes);
    m.metric = r.map;
    if (warnings) {
      for (int c : r.skipped_classes) {
        warnings->push_back("class " + std::to_string(c) +
                            " has no positive in the evaluation split; skipped in mAP");
      }
    }
  }

  const std::string& heavy_model = model.config.cost.heavy_model;
  const bool scs = model.config.mode == TrainMode::kScSampler;
  std::string light_model = IsDesk(heavy_model)
                                ? (scs ? cost::kDeskScSamplerLight : cost::kDeskLight)
                                : (scs ? cost::kScSamplerLight : cost::kLightPlusGating);
  const int n_light = (UsesSelector(model.config.mode) || scs) ? model.spec().timesteps : 0;
  m.cost = cost::PipelineCost(n_light, static_cast<int>(std::lround(m.mean_selected)),
                              heavy_model, RegistryFor(model), light_model);
  return m;
}

MetricsTable Evaluate(const Model& model, const synth::Dataset& test,
                      const std::vector<int>& budgets, SelectionMode selection) {
  MetricsTable table;
  table.mode = ToString(model.config.mode);
  if (selection == SelectionMode::kGateCount) {
    table.rows.push_back(EvaluateBudget(model, test, 0, &table.warnings));
    return table;
  }
  for (int b : budgets) {
    if (b > model.spec().timesteps) {
      throw DomainError("budget " + std::to_string(b) + " exceeds " +
                        std::to_string(model.spec().timesteps) + " timesteps");
    }
    table.rows.push_back(EvaluateBudget(model, test, b, &table.warnings));
  }
  return table;
}

void WriteMetricsCsv(std::ostream& out, const MetricsTable& table) {
  out << kMetricsHeader << "\n";
  out << std::setprecision(12);
  for (const BudgetMetrics& m : table.rows) {
    out << table.mode << "," << m.selection << "," << m.budget << "," << m.mean_selected << ","
        << m.mean_open << "," << m.metric_name << "," << m.metric << "," << m.cost.light_gflops
        << "," << m.cost.heavy_gflops << "," << m.cost.total_gflops << ","
        << m.heavy_invocations << "," << m.expected_invocations << "\n";
  }
}

MetricsTable ReadMetricsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open metrics " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw LoadError(path + " does not start with the metrics header");
  }
  MetricsTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = SplitCsv(line);
    if (f.size() != 12) throw LoadError("malformed metrics row: " + line);
    BudgetMetrics m;
    try {
      table.mode = f[0];
      m.selection = f[1];
      m.budget = std::stoi(f[2]);
      m.mean_selected = std::stod(f[3]);
      m.mean_open = std::stod(f[4]);
      m.metric_name = f[5];
      m.metric = std::stod(f[6]);
      m.cost.light_gflops = std::stod(f[7]);
      m.cost.heavy_gflops = std::stod(f[8]);
      m.cost.total_gflops = std::stod(f[9]);
      m.heavy_invocations = std::stoll(f[10]);
      m.expected_invocations = std::stoll(f[11]);
    } catch (const std::exception&) {
      throw LoadError("malformed metrics row: " + line);
    }
    table.rows.push_back(m);
  }
  return table;
}

GatingReport MakeGatingReport(const Model& model, const synth::Dataset& data) {
  if (!model.selector) {
    throw ContractError("gating report needs a model with a gating module");
  }
  std::vector<const synth::VideoSample*> videos;
  for (const auto& v : data.videos) videos.push_back(&v);
  std::vector<std::size_t> ids(videos.size());
  std::iota(ids.begin(), ids.end(), 0);
  const std::vector<Choice> choices = ChooseTimesteps(model, videos, ids, 0);
  const int classes = model.spec().num_classes;
  const auto t = static_cast<std::size_t>(model.spec().timesteps);
  GatingReport report;
  for (int c = 0; c < classes; ++c) {
    double ratio = 0.0;
    int count = 0;
    std::vector<double> profile(t, 0.0);
    for (std::size_t i = 0; i < videos.size(); ++i) {
      if (!videos[i]->HasLabel(c)) continue;
      ratio += static_cast<double>(choices[i].open) / static_cast<double>(t);
      for (std::size_t p = 0; p < t; ++p) profile[p] += ad::Sigmoid(choices[i].logits[p]);
      ++count;
    }
    if (count == 0) continue;
    for (double& v : profile) v /= count;
    const auto [lo, hi] = std::minmax_element(profile.begin(), profile.end());
    const double low = *lo, span = *hi - *lo;
    for (double& v : profile) v = span > 0.0 ? (v - low) / span : 0.0;
    report.classes.push_back(c);
    report.class_ratio.push_back(ratio / count);
    report.temporal_profile.push_back(std::move(profile));
  }
  if (!report.class_ratio.empty()) {
    const double n = static_cast<double>(report.class_ratio.size());
    const double mean =
        std::accumulate(report.class_ratio.begin(), report.class_ratio.end(), 0.0) / n;
    double var = 0.0;
    for (double r : report.class_ratio) var += (r - mean) * (r - mean);
    report.ratio_variance = var / n;
  }
  return report;
}

void WriteGatingReport(const GatingReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream ratio, variance, profile;
  ratio << std::setprecision(12) << "class,ratio\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    ratio << report.classes[i] << "," << report.class_ratio[i] << "\n";
  }
  variance << std::setprecision(12) << "variance\n" << report.ratio_variance << "\n";
  profile << std::setprecision(12) << "class,position,normalized_gate\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    for (std::size_t p = 0; p < report.temporal_profile[i].size(); ++p) {
      profile << report.classes[i] << "," << p << "," << report.temporal_profile[i][p] << "\n";
    }
  }
  const std::filesystem::path base(dir);
  WriteFile((base / "class_ratio.csv").string(), ratio.str());
  WriteFile((base / "ratio_variance.csv").string(), variance.str());
  WriteFile((base / "temporal_profile.csv").string(), profile.str());
}

}  // namespace timegate::harness
