// tests/test_ops.cpp

// Copyright 2026 The svground Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svg/ops.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "gradsuite.hpp"
#include "svg/rng.hpp"

using svg::Tensor;

TEST(Matmul, IdentityPassThrough) {
  Tensor a = Tensor::from_data({2, 2}, {1, 2, 3, 4});
  Tensor out = svg::matmul(Tensor::identity(2), a);
  for (long i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(out.data()[static_cast<std::size_t>(i)], a.data()[static_cast<std::size_t>(i)]);
  }
}

TEST(Matmul, HandComputedInnerProduct) {
  Tensor a = Tensor::from_data({1, 2}, {1, 2});
  Tensor b = Tensor::from_data({2, 1}, {3, 4});
  Tensor out = svg::matmul(a, b);
  EXPECT_DOUBLE_EQ(out.value(), 11.0);  // 1*3 + 2*4
}

TEST(Matmul, ZeroAnnihilates) {
  svg::Rng rng(7);
  Tensor z = Tensor::zeros({2, 3});
  Tensor any = svg::testing::random_tensor({3, 2}, rng, false);
  Tensor out = svg::matmul(z, any);
  for (double v : out.data()) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Matmul, MismatchNamesBothShapes) {
  Tensor a = Tensor::zeros({2, 3});
  Tensor b = Tensor::zeros({2, 3});
  try {
    svg::matmul(a, b);
    FAIL() << "expected ShapeError";
  } catch (const svg::ShapeError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("[2x3]"), std::string::npos) << msg;
  }
}

TEST(Softmax, SymmetricPair) {
  Tensor out = svg::softmax(Tensor::row({0.0, 0.0}), 1);
  EXPECT_DOUBLE_EQ(out.data()[0], 0.5);
  EXPECT_DOUBLE_EQ(out.data()[1], 0.5);
}

TEST(Softmax, StabilizedAgainstOverflow) {
  Tensor out = svg::softmax(Tensor::row({1000.0, 1000.0}), 1);
  EXPECT_DOUBLE_EQ(out.data()[0], 0.5);
  EXPECT_DOUBLE_EQ(out.data()[1], 0.5);
}

TEST(Softmax, ClosedFormQuarterThreeQuarters) {
  Tensor out = svg::softmax(Tensor::row({0.0, std::log(3.0)}), 1);
  EXPECT_NEAR(out.data()[0], 0.25, 1e-12);
  EXPECT_NEAR(out.data()[1], 0.75, 1e-12);
}

TEST(Softmax, SlicesSumToOneAndPositive) {
  svg::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    long m = rng.uniform_int(1, 6), n = rng.uniform_int(2, 6);
    Tensor x = svg::testing::random_tensor({m, n}, rng, false, 20.0);
    for (int axis : {0, 1}) {
      Tensor s = svg::softmax(x, axis);
      auto sm = s.mat();
      for (double v : s.data()) EXPECT_GT(v, 0.0);
      if (axis == 1) {
        for (long i = 0; i < m; ++i) EXPECT_NEAR(sm.row(i).sum(), 1.0, 1e-9);
      } else {
        for (long j = 0; j < n; ++j) EXPECT_NEAR(sm.col(j).sum(), 1.0, 1e-9);
      }
    }
  }
}

TEST(Conv1d, TwoStrideTwoLayersQuarterLength) {
  svg::Rng rng(3);
  Tensor x = svg::testing::random_tensor({1024, 2}, rng, false);
  Tensor w1 = svg::testing::random_tensor({2, 2, 4}, rng, false);
  Tensor w2 = svg::testing::random_tensor({2, 2, 4}, rng, false);
  Tensor y = svg::conv1d(svg::conv1d(x, w1, {}, 2), w2, {}, 2);
  EXPECT_EQ(y.rows(), 256);
}

TEST(Conv1d, AveragingKernelPreservesConstants) {
  const double c = 0.73;
  Tensor x = Tensor::full({9, 1}, c);
  Tensor w = Tensor::from_data({1, 1, 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  Tensor y = svg::conv1d(x, w, {}, 1);
  ASSERT_EQ(y.rows(), 9);
  for (long t = 1; t < 8; ++t) EXPECT_NEAR(y.at(t, 0), c, 1e-12);  // interior frames only
}

TEST(Conv1d, CeilLengthForOddInput) {
  svg::Rng rng(5);
  Tensor x = svg::testing::random_tensor({5, 1}, rng, false);
  Tensor w = svg::testing::random_tensor({1, 1, 4}, rng, false);
  EXPECT_EQ(svg::conv1d(x, w, {}, 2).rows(), 3);  // ceil(5/2)
}

TEST(Conv1d, EmptyInputRejected) {
  // Zero-length sequences cannot even be constructed; the shape invariant
  // guards the precondition.
  EXPECT_THROW(Tensor::zeros({0, 1}), svg::ShapeError);
}

TEST(LayerNorm, TwoPointSlice) {
  Tensor x = Tensor::row({1.0, 3.0});
  Tensor y = svg::layer_norm(x, 1, {}, {});
  EXPECT_NEAR(y.data()[0], -1.0, 1e-4);  // eps shifts the scale slightly
  EXPECT_NEAR(y.data()[1], 1.0, 1e-4);
}

TEST(LayerNorm, ConstantSliceMapsToZero) {
  Tensor x = Tensor::full({1, 5}, 42.0);
  Tensor y = svg::layer_norm(x, 1, {}, {});
  for (double v : y.data()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(LayerNorm, SlicesStandardized) {
  svg::Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    long m = rng.uniform_int(1, 6), n = rng.uniform_int(2, 6);
    Tensor x = svg::testing::random_tensor({m, n}, rng, false, 5.0);
    Tensor y = svg::layer_norm(x, 1, {}, {}, 1e-12);
    auto ym = y.mat();
    for (long i = 0; i < m; ++i) {
      EXPECT_NEAR(ym.row(i).mean(), 0.0, 1e-6);
      double var = (ym.row(i).array() - ym.row(i).mean()).square().mean();
      EXPECT_NEAR(var, 1.0, 1e-6);
    }
  }
}

TEST(MaskedFill, ReplacesAndBlocksGradient) {
  Tensor x = Tensor::from_data({1, 3}, {1.0, 2.0, 3.0}, true);
  Tensor mask = Tensor::from_data({1, 3}, {0.0, 1.0, 0.0});
  Tensor y = svg::masked_fill(x, mask, -9.0);
  EXPECT_DOUBLE_EQ(y.data()[0], 1.0);
  EXPECT_DOUBLE_EQ(y.data()[1], -9.0);
  EXPECT_DOUBLE_EQ(y.data()[2], 3.0);
  svg::sum(y).backward();
  EXPECT_DOUBLE_EQ(x.grad()[0], 1.0);
  EXPECT_DOUBLE_EQ(x.grad()[1], 0.0);
  EXPECT_DOUBLE_EQ(x.grad()[2], 1.0);
}

TEST(GradientSuite, AllPrimitivesPassFiniteDifferences) {
  svg::Rng rng(20260811);
  auto results = svg::testing::run_op_gradient_suite(5, rng);
  for (const auto& c : results) {
    EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
  }
}
