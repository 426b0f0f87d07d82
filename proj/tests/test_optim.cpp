// tests/test_optim.cpp

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

#include "svg/optim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "svg/ops.hpp"

using svg::Adam;
using svg::AdamConfig;
using svg::ParamStore;
using svg::Rng;
using svg::Tensor;

namespace {

void set_grad(Tensor t, double g) {
  Tensor target = svg::mul_scalar(svg::sum(t), g);
  target.backward();
}

}  // namespace

TEST(Adam, ZeroGradientLeavesParamsUnchanged) {
  Rng rng(1);
  ParamStore store;
  Tensor p = store.create("p", {2, 2}, 0.5, rng);
  std::vector<double> before(p.data().begin(), p.data().end());
  set_grad(p, 0.0);
  AdamConfig cfg;
  cfg.warmup_steps = 10;
  Adam opt(store, cfg);
  opt.step(store);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_DOUBLE_EQ(p.data()[i], before[i]);
}

TEST(Adam, WarmupScalesFirstStep) {
  AdamConfig cfg;
  cfg.base_lr = 0.001;
  cfg.warmup_steps = 100;
  ParamStore store;
  Rng rng(2);
  Tensor p = store.create("p", {1, 1}, 0.0, rng);
  Adam opt(store, cfg);
  EXPECT_DOUBLE_EQ(opt.effective_lr(1), 0.001 / 100.0);
  EXPECT_DOUBLE_EQ(opt.effective_lr(100), 0.001);
  EXPECT_DOUBLE_EQ(opt.effective_lr(250), 0.001);

  // With bias correction, one step with unit gradient moves by
  // lr_eff * g / (|g| + eps).
  set_grad(p, 1.0);
  opt.step(store);
  double expected = -(0.001 / 100.0) * 1.0 / (1.0 + cfg.eps);
  EXPECT_NEAR(p.value(), expected, 1e-15);
  EXPECT_EQ(opt.step_count(), 1);
}

TEST(Adam, ConstantGradientUpdateApproachesLrTimesSign) {
  AdamConfig cfg;
  cfg.base_lr = 0.001;
  cfg.warmup_steps = 1;
  ParamStore store;
  Rng rng(3);
  Tensor p = store.create("p", {1, 2}, 0.0, rng);
  Adam opt(store, cfg);
  const double g0 = 0.37, g1 = -2.9;
  double prev0 = 0.0, prev1 = 0.0;
  double step0 = 0.0, step1 = 0.0;
  for (int i = 0; i < 400; ++i) {
    prev0 = p.data()[0];
    prev1 = p.data()[1];
    Tensor loss = svg::sum(svg::mul(p, Tensor::row({g0, g1})));
    loss.backward();
    opt.step(store);
    step0 = p.data()[0] - prev0;
    step1 = p.data()[1] - prev1;
  }
  EXPECT_NEAR(step0, -cfg.base_lr, 1e-5 * cfg.base_lr + 1e-12);
  EXPECT_NEAR(step1, cfg.base_lr, 1e-5 * cfg.base_lr + 1e-12);
}

TEST(Adam, MissingGradientNamesParameter) {
  ParamStore store;
  Rng rng(4);
  store.create("model.layer.weight", {2, 2}, 0.1, rng);
  Adam opt(store, {});
  try {
    opt.step(store);
    FAIL() << "expected DataError";
  } catch (const svg::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("model.layer.weight"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, RoundTripIsBitExact) {
  Rng rng(5);
  ParamStore store;
  store.create("a.w", {3, 4}, 1.3, rng);
  store.create("a.b", {1, 4}, 0.0, rng);
  store.create("conv.w", {2, 3, 4}, 0.9, rng);
  auto path = std::filesystem::temp_directory_path() / "svg_ckpt_test.ckpt";
  svg::save_checkpoint(path, store);
  auto loaded = svg::load_checkpoint(path);
  ASSERT_EQ(loaded.size(), store.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const auto& orig = store.entries()[i];
    EXPECT_EQ(loaded[i].name, orig.name);
    ASSERT_EQ(loaded[i].value.shape(), orig.value.shape());
    for (long j = 0; j < orig.value.numel(); ++j) {
      // bit-exact, not just close
      EXPECT_EQ(loaded[i].value.data()[static_cast<std::size_t>(j)],
                orig.value.data()[static_cast<std::size_t>(j)]);
    }
  }
  std::filesystem::remove(path);
}

TEST(Checkpoint, TruncatedFileRejected) {
  Rng rng(6);
  ParamStore store;
  store.create("w", {4, 4}, 1.0, rng);
  auto path = std::filesystem::temp_directory_path() / "svg_ckpt_trunc.ckpt";
  svg::save_checkpoint(path, store);
  auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 7);
  EXPECT_THROW(svg::load_checkpoint(path), svg::DataError);
  std::filesystem::remove(path);
}

TEST(Checkpoint, AssignRejectsShapeMismatchNamingParameter) {
  Rng rng(7);
  ParamStore store;
  store.create("enc.w", {2, 3}, 1.0, rng);
  try {
    store.assign("enc.w", Tensor::zeros({3, 2}));
    FAIL() << "expected ShapeError";
  } catch (const svg::ShapeError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("enc.w"), std::string::npos);
    EXPECT_NE(msg.find("[2x3]"), std::string::npos);
    EXPECT_NE(msg.find("[3x2]"), std::string::npos);
  }
}
