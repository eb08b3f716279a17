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

#include "timegate/costmodel.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>

#include "timegate/errors.h"

namespace timegate::cost {
namespace {

double RoundTenth(double x) { return std::round(x * 10.0) / 10.0; }

// Desk-scale costs are far below 0.1 GFLOP and stay exact.
bool IsDesk(const std::string& tag) { return tag.rfind("desk_", 0) == 0; }

}  // namespace

CostRegistry CostRegistry::Published() {
  CostRegistry r;
  r.Set(kLightPlusGating, 7.8 / 128.0);
  r.Set(kScSamplerLight, 7.5 / 128.0);
  // Least-squares rates through the 16- and 64-timestep budgets.
  r.Set("R2D", (16.0 * 61.7 + 64.0 * 246.6) / (16.0 * 16.0 + 64.0 * 64.0));
  r.Set("I3D", (16.0 * 207.8 + 64.0 * 830.7) / (16.0 * 16.0 + 64.0 * 64.0));
  // The two S3D budgets disagree; the 16-timestep one is used.
  r.Set("S3D", 17.3 / 16.0);
  return r;
}

void CostRegistry::Set(const std::string& tag, double gflops_per_timestep) {
  if (!(gflops_per_timestep > 0.0)) {
    throw DomainError("cost registry: rate for '" + tag + "' must be > 0");
  }
  rates_[tag] = gflops_per_timestep;
}

double CostRegistry::Rate(const std::string& tag) const {
  auto it = rates_.find(tag);
  if (it == rates_.end()) throw DomainError("unknown cost model tag '" + tag + "'");
  return it->second;
}

double LightMultiplyAdds(const selector::SelectorConfig& c, int timesteps) {
  const double d = c.raw_dim, h = c.light_hidden, ch = c.channels;
  const double n = c.num_kernels, g = c.gate_hidden;
  double macs = d * h + h * ch;  // encoder
  if (c.context_mode == selector::ContextMode::kContext) {
    // q, k, v projections plus scores and weighted values over T timesteps.
    macs += 3.0 * ch * ch + 2.0 * timesteps * ch;
  }
  macs += n * ch + n * g + g;  // similarity and gating MLP
  return macs;
}

double ScSamplerMultiplyAdds(const selector::SelectorConfig& c, int num_classes) {
  return static_cast<double>(c.raw_dim) * c.light_hidden +
         static_cast<double>(c.light_hidden) * c.channels +
         static_cast<double>(c.channels) * num_classes;
}

double HeavyMultiplyAdds(const classifier::ClassifierConfig& c) {
  const double in = static_cast<double>(c.segment_length) * c.raw_dim;
  const double out = static_cast<double>(c.channels) * c.height * c.width;
  return in * c.heavy_hidden + c.heavy_hidden * out +
         static_cast<double>(c.channels) * c.head_hidden;
}

void CostRegistry::AddDeskModels(const selector::SelectorConfig& selector,
                                 const classifier::ClassifierConfig& classifier,
                                 int timesteps) {
  Set(kDeskLight, LightMultiplyAdds(selector, timesteps) * 1e-9);
  Set(kDeskScSamplerLight, ScSamplerMultiplyAdds(selector, classifier.num_classes) * 1e-9);
  Set(kDeskHeavy, HeavyMultiplyAdds(classifier) * 1e-9);
}

CostReport PipelineCost(int n_light, int n_heavy, const std::string& heavy_model,
                        const CostRegistry& registry, const std::string& light_model) {
  if (n_heavy < 0 || n_light < 0) throw ContractError("pipeline_cost: negative count");
  if (n_light > 0 && n_light < n_heavy) {
    throw ContractError("pipeline_cost: n_light " + std::to_string(n_light) +
                        " < n_heavy " + std::to_string(n_heavy));
  }
  const double heavy_rate = registry.Rate(heavy_model);
  CostReport r;
  r.model = heavy_model;
  r.n_light = n_light;
  r.n_heavy = n_heavy;
  const bool exact = IsDesk(heavy_model) || (n_light > 0 && IsDesk(light_model));
  auto round = [exact](double x) { return exact ? x : RoundTenth(x); };
  r.light_gflops = n_light > 0 ? round(n_light * registry.Rate(light_model)) : 0.0;
  r.heavy_gflops = round(n_heavy * heavy_rate);
  r.total_gflops = round(r.light_gflops + r.heavy_gflops);
  return r;
}

std::vector<TradeoffRow> TradeoffRows(const std::string& heavy_model,
                                      const std::vector<BudgetResult>& results,
                                      int n_light, const CostRegistry& registry,
                                      const std::string& light_model) {
  std::set<int> seen;
  std::vector<TradeoffRow> rows;
  for (const BudgetResult& r : results) {
    if (!seen.insert(r.n_heavy).second) {
      throw ContractError("tradeoff_rows: duplicate budget " + std::to_string(r.n_heavy));
    }
    const CostReport cost = PipelineCost(n_light, r.n_heavy, heavy_model, registry, light_model);
    rows.push_back({heavy_model, r.n_heavy, cost.total_gflops, r.metric});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const TradeoffRow& a, const TradeoffRow& b) {
    return a.gflops < b.gflops || (a.gflops == b.gflops && a.n_heavy < b.n_heavy);
  });
  return rows;
}

void WriteTradeoffCsv(std::ostream& out, const std::vector<TradeoffRow>& rows) {
  out << kTradeoffHeader << "\n";
  for (const TradeoffRow& r : rows) {
    out << r.model << "," << r.n_heavy << "," << std::setprecision(12) << r.gflops
        << "," << r.metric << "\n";
  }
}

}  // namespace timegate::cost
