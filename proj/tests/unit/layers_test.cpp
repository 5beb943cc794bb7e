// Copyright 2026 The avsync Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "avsync/errors.hpp"
#include "avsync/layers.hpp"
#include "avsync/ops.hpp"
#include "oracle_suite.hpp"
#include "oracles.hpp"

namespace avsync {
namespace {

Shape conv_shape(const Shape& in, std::size_t out_ch, Extent3 k) {
  Tape tape(Tape::Mode::kNoGrad);
  Conv3dLayer layer = Conv3dLayer::create(in.back(), out_ch, k, {1, 1, 1}, 1);
  return conv3d(tape.constant(Tensor(in)), layer).shape();
}

Shape pool_shape(const Shape& in, Extent3 k, Extent3 s) {
  Tape tape(Tape::Mode::kNoGrad);
  return maxpool3d(tape.constant(Tensor(in)), k, s).shape();
}

TEST(WindowExtent, FloorFormula) {
  EXPECT_EQ(window_output_extent(9, 3, 1), 7u);
  EXPECT_EQ(window_output_extent(58, 3, 2), 28u);
  EXPECT_EQ(window_output_extent(5, 5, 3), 1u);
  EXPECT_THROW(window_output_extent(2, 3, 1), ShapeError);
  EXPECT_THROW(window_output_extent(2, 1, 0), ShapeError);
}

TEST(Conv3d, VisualFirstRow) { EXPECT_EQ(conv_shape({9, 60, 100, 1}, 16, {3, 3, 3}), (Shape{7, 58, 98, 16})); }

TEST(Conv3d, AudioFirstRow) { EXPECT_EQ(conv_shape({15, 40, 3, 1}, 16, {3, 5, 3}), (Shape{13, 36, 1, 16})); }

TEST(Conv3d, BatchedInputKeepsBatchAxis) {
  EXPECT_EQ(conv_shape({2, 9, 60, 100, 1}, 4, {3, 3, 3}), (Shape{2, 7, 58, 98, 4}));
}

TEST(Conv3d, ScalarKernelScalesInput) {
  Tape tape(Tape::Mode::kNoGrad);
  const Tensor x = oracle::random_normal({2, 3, 4, 1}, 1);
  Var y = conv3d(tape.constant(x), tape.constant(Tensor({1, 1, 1, 1, 1}, 2.5)), tape.constant(Tensor({1}, 0)));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(y.value()[i], 2.5 * x[i]);
}

TEST(Conv3d, KernelLargerThanInputIsShapeError) {
  Tape tape(Tape::Mode::kNoGrad);
  Var x = tape.constant(Tensor({2, 4, 4, 1}));
  EXPECT_THROW(conv3d(x, tape.constant(Tensor({1, 3, 3, 3, 1})), tape.constant(Tensor({1}))), ShapeError);
  EXPECT_THROW(conv3d(x, tape.constant(Tensor({1, 1, 1, 1, 2})), tape.constant(Tensor({1}))), ShapeError);
  EXPECT_THROW(conv3d(tape.constant(Tensor({4, 4})), tape.constant(Tensor({1, 1, 1, 1, 1})),
                      tape.constant(Tensor({1}))),
               ShapeError);
}

TEST(Conv3d, MatchesNestedLoopsOnFixedInstance) {
  const Tensor x = oracle::random_normal({1, 3, 4, 4, 2}, 2);
  const Tensor k = oracle::random_normal({2, 2, 2, 2, 2}, 3);
  const Tensor b = oracle::random_normal({2}, 4);
  Tape tape(Tape::Mode::kNoGrad);
  const Tensor got = conv3d(tape.constant(x), tape.constant(k), tape.constant(b)).value();
  const Tensor want = oracle::conv3d(x, k, b, {1, 1, 1});
  ASSERT_EQ(got.shape(), want.shape());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
}

TEST(MaxPool3d, TableRows) {
  EXPECT_EQ(pool_shape({7, 58, 98, 16}, {1, 3, 3}, {1, 2, 2}), (Shape{7, 28, 48, 16}));
  EXPECT_EQ(pool_shape({13, 36, 1, 16}, {1, 2, 1}, {1, 2, 1}), (Shape{13, 18, 1, 16}));
  EXPECT_THROW(pool_shape({1, 2, 2, 1}, {1, 3, 3}, {1, 1, 1}), ShapeError);
}

TEST(MaxPool3d, ConstantInputAndFirstIndexTieBreak) {
  Tape tape;
  Var x = tape.variable(Tensor({1, 4, 4, 1}, 3));
  Var y = maxpool3d(x, {1, 2, 2}, {1, 2, 2});
  for (Real v : y.value().data()) EXPECT_EQ(v, 3);
  tape.backward(ops::sum(y));
  const auto g = tape.grad(x);
  // Each 2x2 window routes its unit of gradient to its top-left element.
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(g[r * 4 + c], (r % 2 == 0 && c % 2 == 0) ? 1 : 0) << r << "," << c;
  }
}

TEST(MaxPool3d, RoutedGradientSumsToUpstream) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Tape tape;
    Var x = tape.variable(oracle::random_normal({2, 2, 6, 6, 3}, rng()));
    Var y = maxpool3d(x, {1, 2, 3}, {1, 2, 3});
    const Tensor w = oracle::random_normal(y.shape(), rng());
    tape.backward(ops::sum(ops::mul(y, tape.constant(w))));
    double gsum = 0, wsum = 0;
    for (Real g : tape.grad(x)) gsum += g;
    for (Real v : w.data()) wsum += v;
    EXPECT_NEAR(gsum, wsum, 1e-10);
  }
}

TEST(PRelu, Examples) {
  Tape tape(Tape::Mode::kNoGrad);
  auto run = [&](std::initializer_list<Real> x, Real a) {
    Var y = prelu(tape.constant(Tensor::from(x)), tape.constant(Tensor::from({a})));
    return std::vector<Real>(y.value().data().begin(), y.value().data().end());
  };
  EXPECT_EQ(run({2, -2}, 0.25), (std::vector<Real>{2, -0.5}));
  EXPECT_EQ(run({-1, 3}, 0), (std::vector<Real>{0, 3}));
  EXPECT_EQ(run({-1.5, 3}, 1), (std::vector<Real>{-1.5, 3}));
}

TEST(PRelu, PerChannelSlopes) {
  Tape tape(Tape::Mode::kNoGrad);
  Tensor x({2, 2}, std::vector<Real>{-1, -1, -2, 4});
  Var y = prelu(tape.constant(x), tape.constant(Tensor::from({0.1, 0.5})));
  EXPECT_DOUBLE_EQ(y.value()[0], -0.1);
  EXPECT_DOUBLE_EQ(y.value()[1], -0.5);
  EXPECT_DOUBLE_EQ(y.value()[2], -0.2);
  EXPECT_DOUBLE_EQ(y.value()[3], 4);
  EXPECT_THROW(prelu(tape.constant(x), tape.constant(Tensor::from({1, 2, 3}))), ShapeError);
  PReluLayer layer = PReluLayer::create(4);
  for (Real a : layer.slopes.data()) EXPECT_EQ(a, 0.25);
}

TEST(FullyConnected, TableRowsAndDegenerateWeights) {
  Tape tape(Tape::Mode::kNoGrad);
  LinearLayer fc5 = LinearLayer::create(1 * 2 * 7 * 128, 256, 1);
  EXPECT_EQ(fully_connected(tape.constant(Tensor({3, 1792})), fc5).shape(), (Shape{3, 256}));
  LinearLayer audio = LinearLayer::create(3 * 1 * 1 * 128, 64, 2);
  EXPECT_EQ(fully_connected(tape.constant(Tensor({384})), audio).shape(), (Shape{64}));
  Var y = fully_connected(tape.constant(oracle::random_normal({4}, 3)), tape.constant(Tensor({4, 2}, 0)),
                          tape.constant(Tensor::from({1.5, -2})));
  EXPECT_EQ(y.value()[0], 1.5);
  EXPECT_EQ(y.value()[1], -2);
  EXPECT_THROW(fully_connected(tape.constant(Tensor({5})), audio), ShapeError);
}

TEST(HeInit, VarianceAndDeterminism) {
  const Tensor a = he_init({10000}, 50, 9);
  double mean = 0, var = 0;
  for (Real v : a.data()) mean += v;
  mean /= static_cast<double>(a.size());
  for (Real v : a.data()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(a.size());
  EXPECT_NEAR(var, 0.04, 0.004);
  EXPECT_NEAR(mean, 0, 0.01);
  const Tensor b = he_init({10000}, 50, 9);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]);
  const Tensor c = he_init({20000}, 2, 4);
  double v2 = 0;
  for (Real v : c.data()) v2 += v * v;
  EXPECT_NEAR(v2 / static_cast<double>(c.size()), 1.0, 0.05);
  EXPECT_THROW(he_init({3}, 0, 1), ConfigError);
}

TEST(BatchNorm, TrainModeNormalizesPerChannel) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    BatchNormLayer bn = BatchNormLayer::create(3);
    Tensor x = oracle::random_normal({4, 2, 3, 3, 3}, rng(), 5.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += static_cast<Real>(i % 3) * 10;
    Tape tape(Tape::Mode::kNoGrad);
    const Tensor y = batchnorm(tape.constant(x), bn, Mode::kTrain).value();
    const std::size_t per = y.size() / 3;
    for (std::size_t c = 0; c < 3; ++c) {
      double m = 0, v = 0;
      for (std::size_t i = c; i < y.size(); i += 3) m += y[i];
      m /= static_cast<double>(per);
      for (std::size_t i = c; i < y.size(); i += 3) v += (y[i] - m) * (y[i] - m);
      v /= static_cast<double>(per);
      EXPECT_LT(std::abs(m), 1e-6);
      EXPECT_NEAR(v, 1.0, 1e-5);
    }
  }
}

TEST(BatchNorm, ConstantChannelGivesZeros) {
  BatchNormLayer bn = BatchNormLayer::create(2);
  Tape tape(Tape::Mode::kNoGrad);
  const Tensor y = batchnorm(tape.constant(Tensor({3, 2}, 7)), bn, Mode::kTrain).value();
  for (Real v : y.data()) EXPECT_EQ(v, 0);
}

TEST(BatchNorm, InferModeUsesRunningStatistics) {
  BatchNormLayer bn = BatchNormLayer::create(2);
  bn.running_mean = Tensor::from({1, -2});
  bn.running_var = Tensor::from({4, 0.25});
  bn.gamma = Tensor::from({2, 0.5});
  bn.beta = Tensor::from({0.1, -0.3});
  const Tensor x = oracle::random_normal({5, 2}, 7);
  Tape tape(Tape::Mode::kNoGrad);
  const Tensor y = batchnorm(tape.constant(x), bn, Mode::kInfer).value();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t c = i % 2;
    const double want = (x[i] - bn.running_mean[c]) / std::sqrt(bn.running_var[c] + bn.eps) * bn.gamma[c] + bn.beta[c];
    EXPECT_NEAR(y[i], want, 1e-12);
  }
}

TEST(BatchNorm, RunningStatisticsUpdate) {
  BatchNormLayer bn = BatchNormLayer::create(1);
  Tape tape(Tape::Mode::kNoGrad);
  batchnorm(tape.constant(Tensor({2, 1}, std::vector<Real>{1, 3})), bn, Mode::kTrain);
  // Batch mean 2 and variance 1 folded in with momentum 0.1.
  EXPECT_NEAR(bn.running_mean[0], 0.2, 1e-12);
  EXPECT_GT(bn.running_var[0], 0.9);
  const Real m = bn.running_mean[0], v = bn.running_var[0];
  batchnorm(tape.constant(Tensor({2, 1}, std::vector<Real>{5, 9})), bn, Mode::kTrain, false);
  EXPECT_EQ(bn.running_mean[0], m);
  EXPECT_EQ(bn.running_var[0], v);
}

TEST(BatchNorm, SingleSampleTrainBatchIsContractError) {
  BatchNormLayer bn = BatchNormLayer::create(2);
  Tape tape(Tape::Mode::kNoGrad);
  EXPECT_THROW(batchnorm(tape.constant(Tensor({1, 2})), bn, Mode::kTrain), ContractError);
  EXPECT_NO_THROW(batchnorm(tape.constant(Tensor({1, 2})), bn, Mode::kInfer));
}

TEST(Dropout, IdentityCases) {
  const Tensor x = oracle::random_normal({50}, 8);
  Tape tape(Tape::Mode::kNoGrad);
  const Tensor a = dropout(tape.constant(x), 0.5, Mode::kInfer, 1).value();
  const Tensor b = dropout(tape.constant(x), 0.0, Mode::kTrain, 1).value();
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(a[i], x[i]);
    EXPECT_EQ(b[i], x[i]);
  }
  EXPECT_THROW(dropout(tape.constant(x), 1.0, Mode::kTrain, 1), ConfigError);
  EXPECT_THROW(dropout(tape.constant(x), -0.1, Mode::kTrain, 1), ConfigError);
}

TEST(Dropout, DropRateAndExpectation) {
  const Tensor x({200000}, 1);
  Tape tape(Tape::Mode::kNoGrad);
  const Tensor y = dropout(tape.constant(x), 0.5, Mode::kTrain, 42).value();
  double dropped = 0, sum = 0;
  for (Real v : y.data()) {
    if (v == 0) ++dropped;
    else EXPECT_EQ(v, 2);
    sum += v;
  }
  EXPECT_NEAR(dropped / static_cast<double>(y.size()), 0.5, 0.02);
  EXPECT_NEAR(sum / static_cast<double>(y.size()), 1.0, 0.02);
}

TEST(Dropout, MaskIsSeedDeterministic) {
  const Tensor x = oracle::random_normal({100}, 9);
  Tape tape(Tape::Mode::kNoGrad);
  const Tensor a = dropout(tape.constant(x), 0.3, Mode::kTrain, 5).value();
  const Tensor b = dropout(tape.constant(x), 0.3, Mode::kTrain, 5).value();
  const Tensor c = dropout(tape.constant(x), 0.3, Mode::kTrain, 6).value();
  bool differs = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    differs = differs || a[i] != c[i];
  }
  EXPECT_TRUE(differs);
}

// conv3d, maxpool3d, matmul, DCT, delta features and pair selection against
// their oracles on 50 random instances each.
TEST(Oracles, LibraryMatchesBruteForce) {
  for (const auto& r : oracle::run_oracle_suite(50, 2)) {
    SCOPED_TRACE(r.op);
    EXPECT_EQ(r.instances, 50u);
    EXPECT_EQ(r.mismatches, 0u);
    EXPECT_LE(r.max_abs_diff, 1e-10);
  }
}

}  // namespace
}  // namespace avsync
