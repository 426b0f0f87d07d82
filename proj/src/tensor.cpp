// svg/tensor.cpp

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

#include "svg/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace svg {

namespace {

thread_local bool g_grad_enabled = true;

long shape_numel(const std::vector<long>& shape) {
  long n = 1;
  for (long d : shape) {
    if (d <= 0) throw ShapeError("tensor dimensions must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : saved_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = saved_; }

Tensor Tensor::zeros(std::vector<long> shape, bool requires_grad) {
  return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(std::vector<long> shape, double value, bool requires_grad) {
  auto impl = std::make_shared<detail::TensorImpl>();
  long n = shape_numel(shape);
  impl->shape = std::move(shape);
  impl->data.assign(static_cast<std::size_t>(n), value);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::from_data(std::vector<long> shape, std::vector<double> data, bool requires_grad) {
  long n = shape_numel(shape);
  if (n != static_cast<long>(data.size())) {
    throw ShapeError("from_data: shape product " + std::to_string(n) +
                     " != data length " + std::to_string(data.size()));
  }
  auto impl = std::make_shared<detail::TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(data);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from_data({1, 1}, {value}, requires_grad);
}

Tensor Tensor::row(std::vector<double> values, bool requires_grad) {
  long n = static_cast<long>(values.size());
  return from_data({1, n}, std::move(values), requires_grad);
}

Tensor Tensor::from_mat(const Mat& m, bool requires_grad) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return from_data({m.rows(), m.cols()}, std::move(data), requires_grad);
}

Tensor Tensor::identity(long n) {
  Tensor t = zeros({n, n});
  for (long i = 0; i < n; ++i) t.impl_->data[static_cast<std::size_t>(i * n + i)] = 1.0;
  return t;
}

long Tensor::rows() const {
  if (rank() == 1) return 1;
  if (rank() == 2) return impl_->shape[0];
  throw ShapeError("rows(): tensor of rank " + std::to_string(rank()) + " has no 2-D view");
}

long Tensor::cols() const {
  if (rank() == 1) return impl_->shape[0];
  if (rank() == 2) return impl_->shape[1];
  throw ShapeError("cols(): tensor of rank " + std::to_string(rank()) + " has no 2-D view");
}

double Tensor::value() const {
  if (numel() != 1) throw ShapeError("value(): tensor has " + std::to_string(numel()) + " elements");
  return impl_->data[0];
}

double Tensor::at(long r, long c) const { return impl_->data[static_cast<std::size_t>(r * cols() + c)]; }

ConstMatMap Tensor::mat() const { return ConstMatMap(impl_->data.data(), rows(), cols()); }

MatMap Tensor::mutable_mat() { return MatMap(impl_->data.data(), rows(), cols()); }

Tensor& Tensor::set_requires_grad(bool rg) {
  impl_->requires_grad = rg;
  return *this;
}

ConstMatMap Tensor::grad_mat() const {
  if (impl_->grad.empty()) throw DataError("grad_mat(): gradient not populated");
  return ConstMatMap(impl_->grad.data(), rows(), cols());
}

void Tensor::zero_grad() { impl_->grad.clear(); }

Tensor Tensor::detached() const {
  auto impl = std::make_shared<detail::TensorImpl>();
  impl->shape = impl_->shape;
  impl->data = impl_->data;
  impl->requires_grad = false;
  return Tensor(std::move(impl));
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < impl_->shape.size(); ++i) {
    if (i) os << 'x';
    os << impl_->shape[i];
  }
  os << ']';
  return os.str();
}

Tensor Tensor::make_result(std::vector<long> shape, std::vector<double> data,
                           std::vector<Tensor> parents,
                           std::function<void(detail::TensorImpl&)> backward) {
  Tensor out = from_data(std::move(shape), std::move(data));
  bool needs = false;
  if (grad_enabled()) {
    for (const Tensor& p : parents) {
      if (p.defined() && p.requires_grad()) {
        needs = true;
        break;
      }
    }
  }
  if (needs) {
    out.impl_->requires_grad = true;
    out.impl_->parents.reserve(parents.size());
    for (const Tensor& p : parents) {
      if (p.defined()) out.impl_->parents.push_back(p.impl());
    }
    out.impl_->backward = std::move(backward);
  }
  return out;
}

void Tensor::backward() const {
  if (numel() != 1) {
    throw ShapeError("backward(): root must be a single element, got " + shape_str());
  }
  using detail::TensorImpl;

  // Iterative post-order DFS; each node enters the order exactly once, after
  // all of its parents' consumers... i.e. we reverse the order afterwards so
  // every node runs before the nodes it depends on.
  std::vector<TensorImpl*> order;
  std::unordered_set<TensorImpl*> visited;
  struct Frame {
    TensorImpl* node;
    std::size_t next_parent;
  };
  std::vector<Frame> stack;
  stack.push_back({impl_.get(), 0});
  visited.insert(impl_.get());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_parent < f.node->parents.size()) {
      TensorImpl* p = f.node->parents[f.next_parent++].get();
      if (p->backward && !visited.count(p)) {
        visited.insert(p);
        stack.push_back({p, 0});
      }
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }

  impl_->grad_ptr()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    TensorImpl* node = *it;
    if (node->backward && !node->grad.empty()) node->backward(*node);
  }
}

void check_shapes(bool cond, const std::string& op, const Tensor& a, const Tensor& b) {
  if (!cond) {
    throw ShapeError(op + ": incompatible shapes " + a.shape_str() + " and " + b.shape_str());
  }
}

}  // namespace svg
