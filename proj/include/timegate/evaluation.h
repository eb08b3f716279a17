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

#ifndef TIMEGATE_EVALUATION_H_
#define TIMEGATE_EVALUATION_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "timegate/costmodel.h"
#include "timegate/training.h"

namespace timegate::harness {

// Average precision of one class: precision averaged at the rank of every
// positive, ties in score kept in input order. Requires a positive.
double AveragePrecision(std::span<const double> scores, std::span<const double> targets);

struct MapResult {
  double map = 0.0;
  std::vector<int> skipped_classes;  // no positive in the split
};

// scores and targets are [videos x classes], row-major.
MapResult MeanAveragePrecision(std::span<const double> scores,
                               std::span<const double> targets, std::size_t classes);

struct BudgetMetrics {
  int budget = 0;  // 0: the model's own selection
  std::string selection;
  double mean_selected = 0.0;  // heavy timesteps per video
  double mean_open = 0.0;      // gates open on their own (selector modes)
  std::string metric_name;     // accuracy or mAP
  double metric = 0.0;
  cost::CostReport cost;
  std::int64_t heavy_invocations = 0;
  std::int64_t expected_invocations = 0;
};

struct MetricsTable {
  std::string mode;
  std::vector<BudgetMetrics> rows;
  std::vector<std::string> warnings;
};

// Budgets are evaluated per the selection mode: gate_count gives one row with
// the model's own selection; topk gives a row per budget (0 still meaning the
// model's own selection).
MetricsTable Evaluate(const Model& model, const synth::Dataset& test,
                      const std::vector<int>& budgets, SelectionMode selection);
// One budget; budget 0 is the model's own selection.
BudgetMetrics EvaluateBudget(const Model& model, const synth::Dataset& test, int budget,
                             std::vector<std::string>* warnings = nullptr);

cost::CostRegistry RegistryFor(const Model& model);

inline constexpr char kMetricsHeader[] =
    "mode,selection,budget,mean_selected,mean_open,metric_name,metric,light_gflops,"
    "heavy_gflops,total_gflops,heavy_invocations,expected_invocations";
void WriteMetricsCsv(std::ostream& out, const MetricsTable& table);
// Parses a file written by WriteMetricsCsv (cost fields not restored).
MetricsTable ReadMetricsCsv(const std::string& path);

struct GatingReport {
  std::vector<int> classes;           // classes present in the split
  std::vector<double> class_ratio;    // mean selected ratio per class
  double ratio_variance = 0.0;        // population variance across classes
  // Per class, mean gate probability at each position, min-max normalized.
  std::vector<std::vector<double>> temporal_profile;
};

GatingReport MakeGatingReport(const Model& model, const synth::Dataset& data);
// Writes class_ratio.csv, ratio_variance.csv and temporal_profile.csv.
void WriteGatingReport(const GatingReport& report, const std::string& dir);

}  // namespace timegate::harness

#endif  // TIMEGATE_EVALUATION_H_
