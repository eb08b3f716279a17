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

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "timegate/adam.h"
#include "timegate/errors.h"
#include "timegate/gradcheck.h"
#include "timegate/tape.h"

namespace timegate::ad {
namespace {

// Naive triple loop, independent of the Eigen-backed kernel.
std::vector<double> NaiveMatMul(const std::vector<double>& a,
                                const std::vector<double>& b, std::size_t m,
                                std::size_t k, std::size_t p) {
  std::vector<double> c(m * p, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t q = 0; q < k; ++q) c[i * p + j] += a[i * k + q] * b[q * p + j];
  return c;
}

Tensor RandomTensor(Shape shape, std::mt19937_64& rng, double lo = -2.0,
                    double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(NumElements(shape));
  for (double& x : v) x = u(rng);
  return Tensor(std::move(shape), std::move(v));
}

std::vector<double> Values(const Tensor& t) {
  return {t.data().begin(), t.data().end()};
}

TEST(TensorTest, ShapeMustMatchData) {
  EXPECT_THROW(Tensor({2, 3}, std::vector<double>(5)), DimensionError);
  Tensor t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_FALSE(t.node_id().has_value());
}

TEST(MatMulTest, IdentityAndDiagonal) {
  Tape tape;
  Tensor identity({2, 2}, {1, 0, 0, 1});
  Tensor col({2, 1}, {3, 4});
  EXPECT_EQ(Values(tape.MatMul(identity, col)), (std::vector<double>{3, 4}));
  Tensor diag({2, 2}, {1, 0, 0, 2});
  EXPECT_EQ(Values(tape.MatMul(diag, col)),
            NaiveMatMul({1, 0, 0, 2}, {3, 4}, 2, 2, 1));
  EXPECT_EQ(Values(tape.MatMul(diag, col)), (std::vector<double>{3, 8}));
}

TEST(MatMulTest, ZeroAnnihilates) {
  Tape tape;
  std::mt19937_64 rng(1);
  Tensor out = tape.MatMul(Tensor({3, 4}), RandomTensor({4, 2}, rng));
  EXPECT_EQ(out.shape(), (Shape{3, 2}));
  for (double v : out.data()) EXPECT_EQ(v, 0.0);
}

TEST(MatMulTest, MatchesNaiveOnRandomInputs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + rng() % 6, k = 1 + rng() % 6, p = 1 + rng() % 6;
    Tensor a = RandomTensor({m, k}, rng), b = RandomTensor({k, p}, rng);
    Tape tape;
    auto got = Values(tape.MatMul(a, b));
    auto want = NaiveMatMul(Values(a), Values(b), m, k, p);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(MatMulTest, ShapeMismatchNamesBothShapes) {
  Tape tape;
  try {
    tape.MatMul(Tensor({2, 3}), Tensor({2, 3}));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("[2x3]"), std::string::npos);
  }
}

TEST(EwiseTest, GateMultiplies) {
  Tape tape;
  Tensor x({3}, {1, 2, 3});
  EXPECT_EQ(Values(tape.Mul(x, Tensor::Scalar(0.0))), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(Values(tape.Mul(x, Tensor::Scalar(1.0))), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(Values(tape.Add(Tensor({2}, {1, 2}), Tensor({2}, {3, 4}))),
            (std::vector<double>{4, 6}));
  EXPECT_THROW(tape.Add(Tensor({2}), Tensor({3})), DimensionError);
}

TEST(ActivationTest, KnownValues) {
  Tape tape;
  EXPECT_DOUBLE_EQ(tape.Sigmoid(Tensor::Scalar(0.0)).item(), 0.5);
  EXPECT_EQ(tape.Relu(Tensor::Scalar(-3.0)).item(), 0.0);
  EXPECT_NEAR(tape.Sigmoid(Tensor::Scalar(2.0)).item(), 0.880797077977882, 1e-12);
  // Clamped exponent keeps extreme inputs finite.
  EXPECT_EQ(tape.Sigmoid(Tensor::Scalar(-1e6)).item(), Sigmoid(-40.0));
  EXPECT_TRUE(std::isfinite(tape.Sigmoid(Tensor::Scalar(1e6)).item()));
}

TEST(ReduceTest, MaxMeanSum) {
  Tape tape;
  Tensor m({2, 2}, {1, 5, 3, 2});
  EXPECT_EQ(Values(tape.Reduce(ReduceKind::kMax, m, 0)), (std::vector<double>{3, 5}));
  EXPECT_DOUBLE_EQ(tape.Reduce(ReduceKind::kMean, Tensor({3}, {2, 4, 6}), 0).item(), 4.0);
  EXPECT_THROW(tape.Reduce(ReduceKind::kSum, Tensor({0, 2}), 0), DomainError);
}

TEST(ReduceTest, SumGradientIsOnes) {
  Tensor x({4}, {0.3, -1, 2, 7}, true);
  Tape tape;
  tape.Backward(tape.Reduce(ReduceKind::kSum, x, 0));
  for (double g : x.grad()) EXPECT_EQ(g, 1.0);
}

TEST(ReduceTest, MaxRoutesOneUnitPerSliceToFirstArgmax) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor x = RandomTensor({3, 4, 5}, rng);
    // Plant ties along axis 1.
    x.mutable_data()[0 * 20 + 2 * 5 + 1] = 9.0;
    x.mutable_data()[0 * 20 + 3 * 5 + 1] = 9.0;
    x.set_requires_grad(true);
    Tape tape;
    tape.Backward(tape.SumAll(tape.Reduce(ReduceKind::kMax, x, 1)));
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t c = 0; c < 5; ++c) {
        double total = 0.0;
        for (std::size_t j = 0; j < 4; ++j) total += x.grad()[a * 20 + j * 5 + c];
        EXPECT_EQ(total, 1.0);
      }
    }
    EXPECT_EQ(x.grad()[0 * 20 + 2 * 5 + 1], 1.0);
    EXPECT_EQ(x.grad()[0 * 20 + 3 * 5 + 1], 0.0);
  }
}

TEST(LossTest, SoftmaxCrossEntropyValues) {
  Tape tape;
  Tensor uniform({3, 10}, std::vector<double>(30, 0.7));
  std::vector<int> labels{0, 4, 9};
  EXPECT_NEAR(tape.SoftmaxCrossEntropy(uniform, labels).item(), std::log(10.0), 1e-12);
  Tensor sharp({1, 2}, {10, -10});
  std::vector<int> zero{0};
  EXPECT_NEAR(tape.SoftmaxCrossEntropy(sharp, zero).item(), 2.0611536203143807e-9, 1e-18);
  std::vector<int> bad{2};
  EXPECT_THROW(tape.SoftmaxCrossEntropy(sharp, bad), DomainError);
}

TEST(LossTest, BceValues) {
  Tape tape;
  std::vector<double> one{1.0}, zero{0.0}, half{0.5};
  EXPECT_NEAR(tape.BceWithLogits(Tensor({1, 1}, std::vector<double>{0.0}), one).item(), std::log(2.0), 1e-15);
  EXPECT_NEAR(tape.BceWithLogits(Tensor({1, 1}, std::vector<double>{0.0}), zero).item(), std::log(2.0), 1e-15);
  EXPECT_THROW(tape.BceWithLogits(Tensor({1, 1}, std::vector<double>{0.0}), half), DomainError);
}

TEST(BackwardTest, HandChainRule) {
  Tensor x({2}, {1, 2}, true);
  Tape tape;
  tape.Backward(tape.SumAll(tape.Mul(x, x)));
  EXPECT_EQ(Values(Tensor(x.shape(), {x.grad().begin(), x.grad().end()})),
            (std::vector<double>{2, 4}));
}

TEST(BackwardTest, AccumulatesAcrossCallsAndLeavesDisconnectedAlone) {
  Tensor x({2}, {1, 2}, true);
  Tensor unused({2}, {5, 5}, true);
  Tape tape;
  Tensor loss = tape.SumAll(tape.Mul(x, x));
  tape.Backward(loss);
  tape.Backward(loss);
  EXPECT_EQ(x.grad()[0], 4.0);
  EXPECT_EQ(x.grad()[1], 8.0);
  EXPECT_EQ(unused.grad()[0], 0.0);
}

TEST(BackwardTest, RejectsNonScalarLoss) {
  Tensor x({2}, {1, 2}, true);
  Tape tape;
  EXPECT_THROW(tape.Backward(tape.Mul(x, x)), ContractError);
}

TEST(BackwardTest, RecordIsTopological) {
  Tensor x({2, 2}, {1, 2, 3, 4}, true);
  Tape tape;
  Tensor loss = tape.SumAll(tape.Relu(tape.MatMul(x, x)));
  tape.Backward(loss);
  for (std::size_t id = 0; id < tape.num_nodes(); ++id) {
    for (std::size_t input : tape.inputs(id)) EXPECT_LT(input, id);
  }
}

TEST(AdamTest, ZeroGradLeavesParamsUnchanged) {
  Tensor p({3}, {1, -2, 3}, true);
  Adam adam({p});
  adam.Step();
  EXPECT_EQ(Values(p), (std::vector<double>{1, -2, 3}));
}

TEST(AdamTest, FirstStepOnUnitGradient) {
  Tensor p = Tensor::Scalar(0.5, true);
  Adam adam({p});
  p.mutable_grad()[0] = 1.0;
  adam.Step();
  EXPECT_NEAR(0.5 - p.item(), 9.99900009999e-4, 1e-15);
  EXPECT_EQ(p.grad()[0], 0.0);
}

TEST(AdamTest, IdenticalParamsStayIdentical) {
  Tensor a({2}, {0.1, 0.2}, true), b({2}, {0.1, 0.2}, true);
  Adam adam({a, b});
  for (int i = 0; i < 5; ++i) {
    a.mutable_grad()[0] = b.mutable_grad()[0] = 0.3 * i;
    a.mutable_grad()[1] = b.mutable_grad()[1] = -0.7;
    adam.Step();
  }
  EXPECT_EQ(Values(a), Values(b));
}

TEST(AdamTest, MissingGradIsContractError) {
  Tensor p({2});
  Adam adam({p});
  EXPECT_THROW(adam.Step(), ContractError);
}

TEST(GradCheckTest, SigmoidLinearAndMatMulChain) {
  std::mt19937_64 rng(11);
  Tensor x = RandomTensor({5}, rng);
  auto sig = [](Tape& t, const Tensor& v) { return t.SumAll(t.Sigmoid(v)); };
  EXPECT_LT(FiniteDiffCheck(sig, x).max_relative_error, 1e-4);

  Tensor w = RandomTensor({5}, rng);
  auto linear = [w](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(v, w)); };
  EXPECT_LT(FiniteDiffCheck(linear, x).max_relative_error, 1e-7);

  Tensor b = RandomTensor({3, 2}, rng), c = RandomTensor({2, 4}, rng);
  auto chain = [b, c](Tape& t, const Tensor& v) {
    return t.SumAll(t.Tanh(t.MatMul(t.MatMul(v, b), c)));
  };
  EXPECT_LT(FiniteDiffCheck(chain, RandomTensor({2, 3}, rng)).max_relative_error, 1e-4);
}

// Every differentiable operation on random inputs in [-2, 2].
TEST(GradCheckTest, AllOperations) {
  std::mt19937_64 rng(2024);
  std::vector<std::pair<std::string, std::function<double()>>> cases;
  for (int trial = 0; trial < 5; ++trial) {
    Tensor other = RandomTensor({3, 4}, rng);
    Tensor rhs = RandomTensor({4, 2}, rng);
    Tensor batch_rhs = RandomTensor({2, 3, 4}, rng);
    Tensor bias = RandomTensor({4}, rng);
    Tensor scales = RandomTensor({3}, rng);
    std::vector<double> targets{1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 0};
    std::vector<int> labels{3, 0, 2};
    std::vector<std::size_t> rows{2, 0, 2};
    std::vector<std::size_t> offsets{0, 1, 3};
    std::vector<ScalarFn> fns = {
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.MatMul(v, rhs)); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.MatMul(other, t.Reshape(v, {4, 3})))); },
        [&](Tape& t, const Tensor& v) {
          return t.SumAll(t.Sigmoid(t.BatchMatMul(t.Reshape(v, {2, 3, 2}), t.Reshape(t.Scale(batch_rhs, 0.5), {2, 2, 6}))));
        },
        [&](Tape& t, const Tensor& v) {
          return t.SumAll(t.Tanh(t.BatchMatMul(t.Reshape(v, {2, 2, 3}), t.Reshape(other, {2, 2, 3}), true)));
        },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(t.Sub(v, other), t.Add(v, other))); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.ScaleRows(t.Tanh(v), t.Reduce(ReduceKind::kMean, v, 1))); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Sigmoid(t.AddBias(v, bias))); },
        [&](Tape& t, const Tensor& v) { return t.SoftmaxCrossEntropy(v, labels); },
        [&](Tape& t, const Tensor& v) { return t.BceWithLogits(v, targets); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(t.Softmax(v), other)); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.ScaleRows(v, scales))); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.GatherRows(v, rows))); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.SegmentMax(v, offsets))); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.Reduce(ReduceKind::kMax, v, 0))); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.Reduce(ReduceKind::kSum, v, 1))); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Mul(t.Relu(v), other)); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Scale(t.Sigmoid(v), -3.0)); },
        [&](Tape& t, const Tensor& v) { return t.SumAll(t.Tanh(t.Mul(v, Tensor::Scalar(1.7)))); },
    };
    for (std::size_t i = 0; i < fns.size(); ++i) {
      Tensor x = RandomTensor({3, 4}, rng);
      // Keep relu and max away from their kinks.
      for (double& v : x.mutable_data()) {
        if (std::abs(v) < 1e-3) v = 0.5;
      }
      auto result = FiniteDiffCheck(fns[i], x);
      EXPECT_LT(result.max_relative_error, 1e-4)
          << "operation " << i << " trial " << trial << " coord "
          << result.worst_index << " analytic " << result.analytic
          << " numeric " << result.numeric;
    }
  }
}

TEST(DeterminismTest, IdenticalInputsGiveIdenticalResults) {
  std::mt19937_64 rng(5);
  Tensor a = RandomTensor({8, 8}, rng), b = RandomTensor({8, 8}, rng);
  Tape t1, t2;
  EXPECT_EQ(Values(t1.Softmax(t1.MatMul(a, b))), Values(t2.Softmax(t2.MatMul(a, b))));
}

}  // namespace
}  // namespace timegate::ad
