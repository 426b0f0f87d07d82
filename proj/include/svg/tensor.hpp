// svg/tensor.hpp

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

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "svg/base.hpp"

namespace svg {

class Tensor;

namespace detail {

struct TensorImpl {
  std::vector<long> shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;

  // Reverse-mode graph: parents keep the upstream subgraph alive; backward
  // reads this node's grad and accumulates into the parents' grads.
  std::vector<std::shared_ptr<TensorImpl>> parents;
  std::function<void(TensorImpl&)> backward;

  long numel() const { return static_cast<long>(data.size()); }
  double* grad_ptr() {
    if (grad.empty()) grad.assign(data.size(), 0.0);
    return grad.data();
  }
};

}  // namespace detail

/// Enables/disables graph recording in the current thread. Evaluation loops
/// wrap themselves in a NoGradGuard so forward passes allocate no graph.
bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool saved_;
};

/// Dense n-dimensional value of 64-bit floats, row-major, with reverse-mode
/// differentiation. Copies share storage (shallow handles); values are
/// treated as immutable once they participate in a graph, except for grad
/// accumulation.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<long> shape, bool requires_grad = false);
  static Tensor full(std::vector<long> shape, double value, bool requires_grad = false);
  static Tensor from_data(std::vector<long> shape, std::vector<double> data,
                          bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  /// 1 x n row vector.
  static Tensor row(std::vector<double> values, bool requires_grad = false);
  /// Rank-2 tensor wrapping an Eigen matrix (copied).
  static Tensor from_mat(const Mat& m, bool requires_grad = false);
  static Tensor identity(long n);

  bool defined() const { return impl_ != nullptr; }
  const std::vector<long>& shape() const { return impl_->shape; }
  long rank() const { return static_cast<long>(impl_->shape.size()); }
  long dim(long i) const { return impl_->shape[static_cast<std::size_t>(i)]; }
  long numel() const { return impl_->numel(); }

  /// Rows/cols of a rank-2 tensor (rank-1 is treated as 1 x n).
  long rows() const;
  long cols() const;

  std::span<const double> data() const { return impl_->data; }
  std::span<double> mutable_data() { return impl_->data; }
  double value() const;              // numel() == 1
  double at(long r, long c) const;   // rank-2 element access

  ConstMatMap mat() const;  // rank <= 2 view, rank-1 maps to 1 x n
  MatMap mutable_mat();

  bool requires_grad() const { return impl_->requires_grad; }
  Tensor& set_requires_grad(bool rg);

  bool has_grad() const { return !impl_->grad.empty(); }
  std::span<const double> grad() const { return impl_->grad; }
  ConstMatMap grad_mat() const;
  void zero_grad();

  /// Reverse pass from a single-element tensor. Populates grad for every
  /// requires_grad tensor that participated, accumulating (never
  /// overwriting) when a value feeds multiple consumers.
  void backward() const;

  /// Same data, detached from the graph (no grad, no parents).
  Tensor detached() const;

  std::string shape_str() const;

  // Graph-construction hooks used by the operator library.
  std::shared_ptr<detail::TensorImpl> impl() const { return impl_; }
  static Tensor make_result(std::vector<long> shape, std::vector<double> data,
                            std::vector<Tensor> parents,
                            std::function<void(detail::TensorImpl&)> backward);

 private:
  explicit Tensor(std::shared_ptr<detail::TensorImpl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<detail::TensorImpl> impl_;
};

/// Throws ShapeError mentioning both shapes when cond is false.
void check_shapes(bool cond, const std::string& op, const Tensor& a, const Tensor& b);

}  // namespace svg
