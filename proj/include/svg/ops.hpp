// svg/ops.hpp

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

#include "svg/tensor.hpp"

namespace svg {

// Elementwise. Shapes must match exactly.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor add_scalar(const Tensor& a, double s);
Tensor mul_scalar(const Tensor& a, double s);
Tensor neg(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor exp(const Tensor& a);

// Rank-2 linear algebra.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
/// x @ w + b (b broadcast over rows; pass undefined b for no bias).
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

// Broadcasting helpers.
Tensor add_rowvec(const Tensor& x, const Tensor& v);    // v is 1 x C
Tensor scale_rows(const Tensor& x, const Tensor& s);    // s is R x 1

// Structure.
Tensor concat(const std::vector<Tensor>& parts, int axis);
Tensor slice(const Tensor& x, int axis, long start, long len);
Tensor gather_rows(const Tensor& x, const std::vector<long>& indices);
/// Where mask is nonzero the output takes `value`; gradients flow only
/// through unmasked positions. mask carries no gradient.
Tensor masked_fill(const Tensor& x, const Tensor& mask, double value);
Tensor reshape(const Tensor& x, std::vector<long> shape);

// Reductions.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor row_mean(const Tensor& x);  // R x C -> R x 1
Tensor col_mean(const Tensor& x);  // R x C -> 1 x C

// Normalizations along an axis of a rank-<=2 tensor (axis 1: per row,
// axis 0: per column). Softmax is stabilized by max subtraction.
Tensor softmax(const Tensor& x, int axis);
Tensor log_softmax(const Tensor& x, int axis);
/// Per-slice standardization with epsilon-guarded variance, then affine
/// gamma/beta (each 1 x slice_len). Pass undefined gamma/beta for the
/// unit-affine form.
Tensor layer_norm(const Tensor& x, int axis, const Tensor& gamma, const Tensor& beta,
                  double eps = 1e-5);

/// 1-D convolution over a T x c_in sequence with zero same-padding:
/// output length is ceil(T / stride). kernel shape: [c_out, c_in, k];
/// optional bias 1 x c_out.
Tensor conv1d(const Tensor& x, const Tensor& kernel, const Tensor& bias, long stride);

// Losses.
/// -log softmax(logits)[target] for a single-row logit vector.
Tensor cross_entropy_from_logits(const Tensor& logits, long target);
/// Summed binary cross-entropy between probabilities p and constant labels y
/// (same shape); p is clamped to [eps, 1-eps] inside the logs.
Tensor binary_cross_entropy(const Tensor& p, const Tensor& y, double eps = 1e-12);

}  // namespace svg
