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

#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "timegate/errors.h"

namespace timegate::cost {
namespace {

struct Cell {
  int n_light;
  int n_heavy;
  const char* heavy;
  const char* light;
  double total;
};

TEST(PipelineCostTest, PublishedTableCells) {
  const CostRegistry r = CostRegistry::Published();
  const std::vector<Cell> cells = {
      {0, 64, "R2D", kLightPlusGating, 246.6},     {128, 16, "R2D", kScSamplerLight, 69.2},
      {128, 16, "R2D", kLightPlusGating, 69.5},    {0, 64, "S3D", kLightPlusGating, 61.8},
      {128, 16, "S3D", kScSamplerLight, 24.8},     {128, 16, "S3D", kLightPlusGating, 25.1},
      {0, 64, "I3D", kLightPlusGating, 830.7},     {128, 16, "I3D", kScSamplerLight, 215.3},
      {128, 16, "I3D", kLightPlusGating, 215.6}};
  int within = 0;
  for (const Cell& c : cells) {
    const CostReport rep = PipelineCost(c.n_light, c.n_heavy, c.heavy, r, c.light);
    within += std::abs(rep.total_gflops - c.total) <= 0.15;
  }
  // One rate per heavy model cannot fit both S3D budgets.
  EXPECT_EQ(within, 8);
  EXPECT_NEAR(PipelineCost(128, 16, "I3D", r).total_gflops, 215.6, 0.15);
  EXPECT_NEAR(PipelineCost(128, 16, "S3D", r).total_gflops, 25.1, 0.15);
  EXPECT_NEAR(PipelineCost(0, 64, "I3D", r).total_gflops, 830.7, 0.15);
}

TEST(PipelineCostTest, BreakdownAndRounding) {
  const CostRegistry r = CostRegistry::Published();
  const CostReport rep = PipelineCost(128, 16, "S3D", r);
  EXPECT_DOUBLE_EQ(rep.light_gflops, 7.8);
  EXPECT_DOUBLE_EQ(rep.heavy_gflops, 17.3);
  EXPECT_DOUBLE_EQ(rep.total_gflops, 25.1);
  EXPECT_EQ(rep.model, "S3D");
  const CostReport light_only = PipelineCost(128, 0, "I3D", r);
  EXPECT_DOUBLE_EQ(light_only.heavy_gflops, 0.0);
  EXPECT_DOUBLE_EQ(light_only.total_gflops, 7.8);
}

TEST(PipelineCostTest, LinearInHeavyCount) {
  CostRegistry r;
  r.Set("H", 2.5);
  r.Set(kLightPlusGating, 0.5);
  for (int n = 0; n <= 10; ++n) {
    EXPECT_DOUBLE_EQ(PipelineCost(10, n, "H", r).total_gflops, 5.0 + 2.5 * n);
  }
}

TEST(PipelineCostTest, Errors) {
  const CostRegistry r = CostRegistry::Published();
  EXPECT_THROW(PipelineCost(16, 16, "X3D", r), DomainError);
  EXPECT_THROW(PipelineCost(8, 16, "I3D", r), ContractError);
  EXPECT_THROW(PipelineCost(16, -1, "I3D", r), ContractError);
  CostRegistry bad;
  EXPECT_THROW(bad.Set("H", 0.0), DomainError);
}

TEST(DeskCostTest, ExactMultiplyAddCounts) {
  selector::SelectorConfig s;
  s.raw_dim = 4;
  s.light_hidden = 3;
  s.channels = 2;
  s.num_kernels = 5;
  s.gate_hidden = 6;
  s.context_mode = selector::ContextMode::kFrame;
  EXPECT_DOUBLE_EQ(LightMultiplyAdds(s, 10), 4 * 3 + 3 * 2 + 5 * 2 + 5 * 6 + 6);
  s.context_mode = selector::ContextMode::kContext;
  EXPECT_DOUBLE_EQ(LightMultiplyAdds(s, 10), 64 + 3 * 2 * 2 + 2 * 10 * 2);
  EXPECT_DOUBLE_EQ(ScSamplerMultiplyAdds(s, 7), 12 + 6 + 14);
  classifier::ClassifierConfig c;
  c.raw_dim = 4;
  c.segment_length = 2;
  c.heavy_hidden = 3;
  c.channels = 5;
  c.height = 2;
  c.width = 1;
  c.head_hidden = 6;
  EXPECT_DOUBLE_EQ(HeavyMultiplyAdds(c), 8 * 3 + 3 * 10 + 5 * 6);
}

TEST(DeskCostTest, DeskTagsAreNotRounded) {
  selector::SelectorConfig s;
  classifier::ClassifierConfig c;
  CostRegistry r;
  r.AddDeskModels(s, c, 32);
  const double light = LightMultiplyAdds(s, 32) * 1e-9;
  const double heavy = HeavyMultiplyAdds(c) * 1e-9;
  const CostReport rep = PipelineCost(32, 5, kDeskHeavy, r, kDeskLight);
  EXPECT_GT(rep.total_gflops, 0.0);
  EXPECT_NEAR(rep.light_gflops, 32 * light, 1e-18);
  EXPECT_NEAR(rep.heavy_gflops, 5 * heavy, 1e-18);
  EXPECT_NEAR(rep.total_gflops, 32 * light + 5 * heavy, 1e-18);
}

TEST(TradeoffTest, SortedRowsAndCsv) {
  const CostRegistry r = CostRegistry::Published();
  const std::vector<BudgetResult> results = {{16, 0.8}, {4, 0.6}, {8, 0.7}};
  const std::vector<TradeoffRow> rows = TradeoffRows("I3D", results, 128, r);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].n_heavy, 4);
  EXPECT_EQ(rows[2].n_heavy, 16);
  EXPECT_LT(rows[0].gflops, rows[1].gflops);
  EXPECT_DOUBLE_EQ(rows[2].metric, 0.8);
  std::ostringstream out;
  WriteTradeoffCsv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "model,n_heavy_timesteps,gflops,metric");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("I3D,4,", 0), 0u);
  EXPECT_THROW(TradeoffRows("I3D", {{4, 0.1}, {4, 0.2}}, 128, r), ContractError);
}

}  // namespace
}  // namespace timegate::cost
