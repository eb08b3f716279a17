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

#ifndef TIMEGATE_COSTMODEL_H_
#define TIMEGATE_COSTMODEL_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "timegate/classifier.h"
#include "timegate/selector.h"

namespace timegate::cost {

inline constexpr char kLightPlusGating[] = "light_plus_gating";
inline constexpr char kScSamplerLight[] = "scsampler_light";
inline constexpr char kDeskLight[] = "desk_light_plus_gating";
inline constexpr char kDeskScSamplerLight[] = "desk_scsampler_light";
inline constexpr char kDeskHeavy[] = "desk_heavy";

// GFLOPs per timestep, keyed by model tag.
class CostRegistry {
 public:
  // Published per-timestep budgets of the light stages and the R2D, S3D and
  // I3D heavy models.
  static CostRegistry Published();

  void Set(const std::string& tag, double gflops_per_timestep);
  double Rate(const std::string& tag) const;  // DomainError if unknown
  bool Has(const std::string& tag) const { return rates_.count(tag) > 0; }
  const std::map<std::string, double>& rates() const { return rates_; }

  // Adds the desk-scale stand-ins under the desk_* tags, measured as exact
  // multiply-add counts of one timestep's forward pass.
  void AddDeskModels(const selector::SelectorConfig& selector,
                     const classifier::ClassifierConfig& classifier,
                     int timesteps);

 private:
  std::map<std::string, double> rates_;
};

// Multiply-adds of one timestep through the light encoder, optional
// attention (which scales with the T timesteps it attends over), similarity
// and gating MLP.
double LightMultiplyAdds(const selector::SelectorConfig& config, int timesteps);
// Light encoder plus a per-timestep linear head of L classes.
double ScSamplerMultiplyAdds(const selector::SelectorConfig& config, int num_classes);
// Segment encoder plus the first head layer for one timestep.
double HeavyMultiplyAdds(const classifier::ClassifierConfig& config);

struct CostReport {
  double light_gflops = 0.0;
  double heavy_gflops = 0.0;
  double total_gflops = 0.0;
  int n_light = 0;
  int n_heavy = 0;
  std::string model;
};

// Rounded to 0.1 GFLOP unless a desk_* tag is involved. n_light == 0 denotes an ungated pipeline; otherwise
// n_light >= n_heavy >= 0 is required (ContractError).
CostReport PipelineCost(int n_light, int n_heavy, const std::string& heavy_model,
                        const CostRegistry& registry,
                        const std::string& light_model = kLightPlusGating);

struct BudgetResult {
  int n_heavy = 0;
  double metric = 0.0;
};

struct TradeoffRow {
  std::string model;
  int n_heavy = 0;
  double gflops = 0.0;
  double metric = 0.0;
};

// Rows sorted by ascending GFLOPs. Budgets must be distinct (ContractError).
std::vector<TradeoffRow> TradeoffRows(const std::string& heavy_model,
                                      const std::vector<BudgetResult>& results,
                                      int n_light, const CostRegistry& registry,
                                      const std::string& light_model = kLightPlusGating);

inline constexpr char kTradeoffHeader[] = "model,n_heavy_timesteps,gflops,metric";
void WriteTradeoffCsv(std::ostream& out, const std::vector<TradeoffRow>& rows);

}  // namespace timegate::cost

#endif  // TIMEGATE_COSTMODEL_H_
