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

#include "timegate/gating.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "timegate/errors.h"
#include "timegate/gradcheck.h"

namespace timegate::gating {
namespace {

using ad::Tape;
using ad::Tensor;

TEST(SimilarityTest, ZeroFeatureGivesZeroSimilarity) {
  Rng rng(1);
  ConceptBank bank = ConceptBank::Create(5, 3, rng);
  Tape tape;
  Tensor s = Similarity(tape, Tensor({3}), bank);
  ASSERT_EQ(s.shape(), (ad::Shape{5}));
  for (double v : s.data()) EXPECT_EQ(v, 0.0);
}

TEST(SimilarityTest, DiagonalKernelsByDotProduct) {
  ConceptBank bank{Tensor({2, 2}, {1, 0, 0, 2}, true)};
  Tensor x({2}, {3, 4});
  Tape tape;
  Tensor s = Similarity(tape, x, bank);
  // Dot product of each kernel row with x.
  for (std::size_t n = 0; n < 2; ++n) {
    double want = 0.0;
    for (std::size_t c = 0; c < 2; ++c) want += bank.kernels.at(n * 2 + c) * x.at(c);
    EXPECT_DOUBLE_EQ(s.at(n), want);
  }
  EXPECT_EQ(s.at(0), 3.0);
  EXPECT_EQ(s.at(1), 8.0);
}

TEST(SimilarityTest, BilinearInFeatureAndBatchAgrees) {
  Rng rng(2);
  ConceptBank bank = ConceptBank::Create(4, 3, rng);
  Tensor x({3}, {0.2, -1.1, 0.7});
  Tensor x3({3}, {0.6, -3.3, 2.1});
  Tape tape;
  Tensor s = Similarity(tape, x, bank);
  Tensor s3 = Similarity(tape, x3, bank);
  Tensor batch = Similarity(tape, Tensor({2, 3}, {0.2, -1.1, 0.7, 0.6, -3.3, 2.1}), bank);
  for (std::size_t n = 0; n < 4; ++n) {
    EXPECT_NEAR(s3.at(n), 3.0 * s.at(n), 1e-12);
    EXPECT_NEAR(batch.at(n), s.at(n), 1e-12);
    EXPECT_NEAR(batch.at(4 + n), s3.at(n), 1e-12);
  }
  EXPECT_THROW(Similarity(tape, Tensor({4}), bank), DimensionError);
}

TEST(GateLogitTest, ZeroWeightsGiveZero) {
  GatingMlp mlp{Tensor({3, 2}, true), Tensor({2}, true), Tensor({2, 1}, true),
                Tensor({1}, true)};
  Tape tape;
  EXPECT_EQ(GateLogit(tape, Tensor({3}, {1, 2, 3}), mlp).item(), 0.0);
}

TEST(GateLogitTest, HandSetTwoByTwoByOne) {
  GatingMlp mlp{Tensor({2, 2}, {1, -1, 0.5, 2}, true), Tensor({2}, {0.1, -0.2}, true),
                Tensor({2, 1}, {2, -3}, true), Tensor({1}, {0.5}, true)};
  // Hidden pre-activations: [1 - 1 + 0.1, -1 - 4 - 0.2] = [0.1, -5.2];
  // relu -> [0.1, 0]; alpha = 2 * 0.1 + 0.5.
  Tape tape;
  EXPECT_NEAR(GateLogit(tape, Tensor({2}, {1, -2}), mlp).item(), 0.7, 1e-12);
}

TEST(GateLogitTest, GradientWrtSimilarityMatchesFiniteDifferences) {
  Rng rng(9);
  GatingMlp mlp = GatingMlp::Create(6, 4, rng, 0.3);
  Tensor s({6}, {0.5, -1.2, 1.9, 0.3, -0.4, 1.1});
  auto f = [&mlp](Tape& t, const Tensor& v) { return GateLogit(t, v, mlp); };
  EXPECT_LT(ad::FiniteDiffCheck(f, s).max_relative_error, 1e-4);
  EXPECT_THROW({ Tape t; GateLogit(t, Tensor({5}), mlp); }, DimensionError);
}

TEST(NoiseTest, FixedSeedGivesFixedSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(SampleGateNoise(a), SampleGateNoise(b));
}

TEST(NoiseTest, LogisticMomentsMonteCarlo) {
  Rng rng(123);
  const int n = 100000;
  double sum = 0.0;
  int positive = 0;
  for (int i = 0; i < n; ++i) {
    const double g = SampleGateNoise(rng);
    sum += g;
    positive += g > 0.0;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(static_cast<double>(positive) / n, 0.5, 0.01);
}

TEST(ActivationTest, TrainModeValues) {
  GateDecision open = ActivateTrain(2.0, 0.0);
  EXPECT_NEAR(open.value, 0.880797077977882, 1e-12);
  EXPECT_TRUE(open.open);
  GateDecision closed = ActivateTrain(-2.0, 0.0);
  EXPECT_EQ(closed.value, 0.0);
  EXPECT_FALSE(closed.open);
  GateDecision tie = ActivateTrain(0.0, 0.0);
  EXPECT_EQ(tie.value, 0.0);
  EXPECT_FALSE(tie.open);
}

TEST(ActivationTest, TestModeStep) {
  EXPECT_EQ(ActivateTest(3.0).value, 1.0);
  EXPECT_EQ(ActivateTest(-3.0).value, 0.0);
  EXPECT_EQ(ActivateTest(0.0).value, 0.0);
  EXPECT_FALSE(ActivateTest(0.0).open);
}

TEST(ActivationTest, OpenProbabilityEqualsSigmoid) {
  Rng rng(77);
  for (double alpha : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    int open = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) open += ActivateTrain(alpha, SampleGateNoise(rng)).open;
    EXPECT_NEAR(static_cast<double>(open) / n, ad::Sigmoid(alpha), 0.02) << alpha;
  }
}

TEST(ActivationTest, NoiseFreeTrainMatchesTestAndRangesHold) {
  Rng rng(5);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int i = 0; i < 10000; ++i) {
    const double alpha = normal(rng);
    GateDecision train = ActivateTrain(alpha, 0.0);
    GateDecision test = ActivateTest(alpha);
    EXPECT_EQ(train.open, test.open);
    EXPECT_TRUE(train.value == 0.0 || (train.value > 0.5 && train.value <= 1.0));
    EXPECT_TRUE(test.value == 0.0 || test.value == 1.0);
    EXPECT_EQ(train.open, train.value > 0.0);
    EXPECT_EQ(test.open, test.value == 1.0);
  }
}

TEST(ActivationTest, TestModeIsMonotone) {
  bool seen_open = false;
  for (double alpha = -5.0; alpha <= 5.0; alpha += 0.01) {
    const bool open = ActivateTest(alpha).open;
    if (seen_open) EXPECT_TRUE(open);
    seen_open = seen_open || open;
  }
  EXPECT_TRUE(seen_open);
}

TEST(ActivationTest, TrainGradientFlowsOnlyThroughOpenGates) {
  Tensor logits({3}, {2.0, -2.0, 0.7}, true);
  std::vector<double> noise{0.0, 0.0, 0.1};
  Tape tape;
  GateActivation act = ActivateTrain(tape, logits, noise);
  tape.Backward(tape.SumAll(act.values));
  const double g0 = ad::Sigmoid(2.0);
  EXPECT_NEAR(logits.grad()[0], g0 * (1 - g0), 1e-12);
  EXPECT_EQ(logits.grad()[1], 0.0);
  const double g2 = ad::Sigmoid(0.8);
  EXPECT_NEAR(logits.grad()[2], g2 * (1 - g2), 1e-12);
  // Away from the threshold the clipped sigmoid is smooth.
  auto f = [&noise](Tape& t, const Tensor& v) {
    return t.SumAll(ActivateTrain(t, v, noise).values);
  };
  EXPECT_LT(ad::FiniteDiffCheck(f, Tensor({3}, {2.0, -2.0, 0.7})).max_relative_error, 1e-4);
}

TEST(ApplyGateTest, ClosedOpenAndSoft) {
  Tensor x({3}, {1.5, -2.0, 4.0}, true);
  Tape tape;
  Tensor closed = ApplyGate(tape, x, ActivateTest(-1.0));
  for (double v : closed.data()) EXPECT_EQ(v, 0.0);
  Tensor open = ApplyGate(tape, x, ActivateTest(1.0));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(open.at(i), x.at(i));
  Tensor soft = ApplyGate(tape, x, Tensor::Scalar(0.9));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(soft.at(i), 0.9 * x.at(i));
}

TEST(ApplyGateTest, ClosedGateBlocksGradient) {
  Tensor x({2, 3}, {1, 2, 3, 4, 5, 6}, true);
  Tensor gates({2}, {0.0, 0.8});
  Tape tape;
  tape.Backward(tape.SumAll(ApplyGate(tape, x, gates)));
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(x.grad()[c], 0.0);
    EXPECT_DOUBLE_EQ(x.grad()[3 + c], 0.8);
  }
}

TEST(L0PenaltyTest, KnownValues) {
  Tape tape;
  EXPECT_EQ(L0Penalty(tape, Tensor({4}, {1, 2, 3, 4}), 0.0).item(), 0.0);
  EXPECT_DOUBLE_EQ(L0Penalty(tape, Tensor({6}), 1.0).item(), 0.5);
  EXPECT_NEAR(L0Penalty(tape, Tensor({2}, {-40, 40}), 1.0).item(), 0.5, 1e-15);
  EXPECT_THROW(L0Penalty(tape, Tensor({2}), -0.1), DomainError);
}

TEST(L0PenaltyTest, StrictlyIncreasingInEachLogit) {
  Rng rng(8);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    Tensor logits({5});
    for (double& v : logits.mutable_data()) v = u(rng);
    Tape tape;
    const double base = L0Penalty(tape, logits, 0.3).item();
    Tensor bumped = logits.Clone();
    bumped.mutable_data()[trial % 5] += 0.05;
    EXPECT_GT(L0Penalty(tape, bumped, 0.3).item(), base);
  }
}

}  // namespace
}  // namespace timegate::gating
