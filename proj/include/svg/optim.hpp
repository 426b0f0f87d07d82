// svg/optim.hpp

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

#pragma once

#include <vector>

#include "svg/params.hpp"

namespace svg {

struct AdamConfig {
  double base_lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long warmup_steps = 1;  // effective lr = base_lr * min(1, step / warmup_steps)
};

/// Adam with bias correction and linear learning-rate warmup. Moment buffers
/// are aligned with the store's registration order.
class Adam {
 public:
  Adam(const ParamStore& store, AdamConfig cfg);

  /// Applies one update from the gradients currently attached to the store's
  /// parameters, then clears them. A parameter without a gradient is a
  /// contract violation and throws naming it.
  void step(ParamStore& store);

  long step_count() const { return step_count_; }
  double effective_lr(long step) const;

 private:
  AdamConfig cfg_;
  long step_count_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace svg
