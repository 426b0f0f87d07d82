// svg/optim.cpp

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

#include <algorithm>
#include <cmath>

namespace svg {

Adam::Adam(const ParamStore& store, AdamConfig cfg) : cfg_(cfg) {
  if (cfg_.warmup_steps < 1) throw DataError("adam: warmup_steps must be positive");
  m_.reserve(store.size());
  v_.reserve(store.size());
  for (const Parameter& p : store.entries()) {
    m_.emplace_back(static_cast<std::size_t>(p.value.numel()), 0.0);
    v_.emplace_back(static_cast<std::size_t>(p.value.numel()), 0.0);
  }
}

double Adam::effective_lr(long step) const {
  double ramp = std::min(1.0, static_cast<double>(step) / static_cast<double>(cfg_.warmup_steps));
  return cfg_.base_lr * ramp;
}

void Adam::step(ParamStore& store) {
  if (store.size() != m_.size()) {
    throw DataError("adam: parameter store changed size since construction");
  }
  ++step_count_;
  const double lr = effective_lr(step_count_);
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_count_));
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Parameter& p = store.entries()[i];
    if (!p.value.has_grad()) {
      throw DataError("adam_step: missing gradient for parameter '" + p.name + "'");
    }
    Tensor value = p.value;  // shallow handle, shares storage
    auto g = value.grad();
    auto data = value.mutable_data();
    std::vector<double>& m = m_[i];
    std::vector<double>& v = v_[i];
    for (std::size_t j = 0; j < data.size(); ++j) {
      m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g[j];
      v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g[j] * g[j];
      double mhat = m[j] / bc1;
      double vhat = v[j] / bc2;
      data[j] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
    value.zero_grad();
  }
}

}  // namespace svg
