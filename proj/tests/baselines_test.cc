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

#include "timegate/baselines.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "timegate/errors.h"

namespace timegate::baselines {
namespace {

synth::VideoSample RandomVideo(int timesteps, int frames_per_timestep, int raw_dim, Rng& rng) {
  synth::VideoSample v;
  v.num_timesteps = timesteps;
  v.frames_per_timestep = frames_per_timestep;
  v.raw_dim = raw_dim;
  v.labels = {0};
  v.relevance.assign(static_cast<std::size_t>(timesteps), 0);
  v.prototypes.assign(static_cast<std::size_t>(timesteps), 0);
  v.frames.resize(static_cast<std::size_t>(timesteps * frames_per_timestep * raw_dim));
  for (double& x : v.frames) x = 2.0 * OpenUniform(rng) - 1.0;
  return v;
}

using Indices = std::vector<std::size_t>;

TEST(SampleIndicesTest, UniformTakesSegmentMiddles) {
  EXPECT_EQ(SampleIndices(SampleMode::kUniform, 8, 4), (Indices{1, 3, 5, 7}));
  EXPECT_EQ(SampleIndices(SampleMode::kUniform, 32, 1), (Indices{16}));
  EXPECT_EQ(SampleIndices(SampleMode::kUniform, 5, 5), (Indices{0, 1, 2, 3, 4}));
}

TEST(SampleIndicesTest, TopKBreaksTiesLow) {
  const std::vector<double> scores = {0.1, 0.9, 0.9, 0.2};
  EXPECT_EQ(SampleIndices(SampleMode::kTopK, 4, 2, scores), (Indices{1, 2}));
  EXPECT_EQ(SampleIndices(SampleMode::kTopK, 4, 1, scores), (Indices{1}));
  EXPECT_EQ(SampleIndices(SampleMode::kTopK, 4, 4, scores), (Indices{0, 1, 2, 3}));
  EXPECT_THROW(SampleIndices(SampleMode::kTopK, 5, 2, scores), ContractError);
}

TEST(SampleIndicesTest, KOutOfRangeIsDomainError) {
  EXPECT_THROW(SampleIndices(SampleMode::kUniform, 4, 5), DomainError);
  EXPECT_THROW(SampleIndices(SampleMode::kUniform, 4, 0), DomainError);
  EXPECT_THROW(SampleIndices(SampleMode::kRandom, 4, 5, {}, 1), DomainError);
}

TEST(SampleIndicesTest, RandomIsSeededDistinctAndSorted) {
  EXPECT_THROW(SampleIndices(SampleMode::kRandom, 8, 3), ContractError);
  std::set<Indices> seen;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Indices a = SampleIndices(SampleMode::kRandom, 32, 6, {}, seed);
    EXPECT_EQ(a, SampleIndices(SampleMode::kRandom, 32, 6, {}, seed));
    ASSERT_EQ(a.size(), 6u);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 6u);
    EXPECT_LT(a.back(), 32u);
    seen.insert(a);
  }
  EXPECT_GT(seen.size(), 40u);
}

TEST(MaxProbabilityTest, HandValues) {
  EXPECT_NEAR(MaxProbability(std::vector<double>{0.0, std::log(3.0)}), 0.75, 1e-15);
  EXPECT_NEAR(MaxProbability(std::vector<double>{1000.0, 0.0, 0.0}), 1.0, 1e-15);
  EXPECT_NEAR(MaxProbability(std::vector<double>(4, -7.0)), 0.25, 1e-15);
  EXPECT_THROW(MaxProbability({}), DomainError);
}

TEST(ScSamplerTest, UniformHeadScoresOneOverL) {
  Rng rng(1);
  ScSampler model = ScSampler::Create(3, 5, 4, 6, 2, rng);
  for (double& v : model.w.mutable_data()) v = 0.0;
  for (double& v : model.b.mutable_data()) v = 0.0;
  synth::VideoSample video = RandomVideo(5, 2, 3, rng);
  for (double s : ScoreVideo(model, video)) EXPECT_NEAR(s, 1.0 / 6.0, 1e-15);
  EXPECT_THROW(ScSamplerScore(std::vector<double>(3, 0.0), model), DimensionError);
  EXPECT_THROW(ScSampler::Create(3, 5, 4, 1, 2, rng), DomainError);
}

TEST(ScSamplerTest, ScoresIgnoreOtherTimesteps) {
  Rng rng(2);
  ScSampler model = ScSampler::Create(3, 5, 4, 6, 2, rng);
  synth::VideoSample video = RandomVideo(6, 2, 3, rng);
  const std::vector<double> before = ScoreVideo(model, video);
  ASSERT_EQ(before.size(), 6u);
  for (int i = 4 * 2 * 3; i < 5 * 2 * 3; ++i) video.frames[static_cast<std::size_t>(i)] += 3.0;
  const std::vector<double> after = ScoreVideo(model, video);
  for (std::size_t i = 0; i < 6; ++i) {
    if (i == 4) {
      EXPECT_NE(after[i], before[i]);
    } else {
      EXPECT_EQ(after[i], before[i]);
    }
  }
  // Reordering timesteps permutes the scores.
  synth::VideoSample swapped = video;
  std::swap_ranges(swapped.frames.begin(), swapped.frames.begin() + 6,
                   swapped.frames.begin() + 30);
  const std::vector<double> perm = ScoreVideo(model, swapped);
  EXPECT_EQ(perm[0], after[5]);
  EXPECT_EQ(perm[5], after[0]);
}

TEST(SampleModeTest, Names) {
  EXPECT_EQ(ToString(SampleMode::kUniform), "uniform");
  EXPECT_EQ(ToString(SampleMode::kRandom), "random");
  EXPECT_EQ(ToString(SampleMode::kTopK), "topk");
}

}  // namespace
}  // namespace timegate::baselines
