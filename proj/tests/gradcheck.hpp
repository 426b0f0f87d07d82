// tests/gradcheck.hpp

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

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "svg/rng.hpp"
#include "svg/tensor.hpp"

namespace svg::testing {

struct GradCheckResult {
  bool ok = true;
  double max_rel_error = 0.0;
  std::string detail;
};

/// Central finite-difference check of a scalar-valued function against the
/// reverse-mode gradients of its inputs. rel error uses max(1, |a|, |n|) in
/// the denominator so near-zero gradients are compared absolutely.
inline GradCheckResult check_gradients(const std::vector<svg::Tensor>& inputs,
                                       const std::function<svg::Tensor()>& fn,
                                       double h = 1e-5, double tol = 1e-4) {
  GradCheckResult result;
  for (svg::Tensor input : inputs) input.zero_grad();
  svg::Tensor loss = fn();
  loss.backward();

  for (std::size_t which = 0; which < inputs.size(); ++which) {
    svg::Tensor input = inputs[which];
    if (!input.requires_grad()) continue;
    if (!input.has_grad()) {
      result.ok = false;
      result.detail = "input " + std::to_string(which) + " has no gradient after backward";
      return result;
    }
    auto grad = input.grad();
    auto data = input.mutable_data();
    svg::NoGradGuard no_graphs_during_probing;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double saved = data[i];
      data[i] = saved + h;
      double up = fn().value();
      data[i] = saved - h;
      double down = fn().value();
      data[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = grad[i];
      const double denom = std::max({1.0, std::abs(numeric), std::abs(analytic)});
      const double rel = std::abs(numeric - analytic) / denom;
      result.max_rel_error = std::max(result.max_rel_error, rel);
      if (rel >= tol) {
        std::ostringstream os;
        os << "input " << which << " element " << i << ": analytic " << analytic
           << " vs numeric " << numeric << " (rel " << rel << ")";
        result.ok = false;
        result.detail = os.str();
        return result;
      }
    }
  }
  return result;
}

/// Random tensor with entries uniform in [-1, 1], dims <= 6 by convention of
/// the small-instance gradient suite.
inline svg::Tensor random_tensor(std::vector<long> shape, svg::Rng& rng, bool requires_grad = true,
                                 double scale = 1.0) {
  long n = 1;
  for (long d : shape) n *= d;
  std::vector<double> data(static_cast<std::size_t>(n));
  for (double& v : data) v = rng.uniform(-scale, scale);
  return svg::Tensor::from_data(std::move(shape), std::move(data), requires_grad);
}

}  // namespace svg::testing
