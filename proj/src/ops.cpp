// svg/ops.cpp

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

#include <algorithm>
#include <cmath>

namespace svg {

namespace {

using detail::TensorImpl;

MatMap gmap(TensorImpl& t, long r, long c) { return MatMap(t.grad_ptr(), r, c); }
ConstMatMap vmap(const TensorImpl& t, long r, long c) {
  return ConstMatMap(t.data.data(), r, c);
}
ConstMatMap ogmap(const TensorImpl& t, long r, long c) {
  return ConstMatMap(t.grad.data(), r, c);
}

bool wants_grad(const TensorImpl& t) { return t.requires_grad; }

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  check_shapes(a.shape() == b.shape(), op, a, b);
}

void check_axis(int axis) {
  if (axis != 0 && axis != 1) throw ShapeError("axis must be 0 or 1");
}

Tensor elementwise_unary(const Tensor& a, std::vector<double> out,
                         std::function<double(double x, double y, double g)> dfn) {
  long n = a.numel();
  return Tensor::make_result(
      a.shape(), std::move(out), {a},
      [n, dfn = std::move(dfn)](TensorImpl& o) {
        TensorImpl& p = *o.parents[0];
        if (!wants_grad(p)) return;
        double* pg = p.grad_ptr();
        for (long i = 0; i < n; ++i) pg[i] += dfn(p.data[i], o.data[i], o.grad[i]);
      });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape("add", a, b);
  std::vector<double> out(a.data().begin(), a.data().end());
  for (long i = 0; i < a.numel(); ++i) out[i] += b.data()[i];
  long n = a.numel();
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [n](TensorImpl& o) {
    for (int side = 0; side < 2; ++side) {
      TensorImpl& p = *o.parents[side];
      if (!wants_grad(p)) continue;
      double* pg = p.grad_ptr();
      for (long i = 0; i < n; ++i) pg[i] += o.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape("sub", a, b);
  std::vector<double> out(a.data().begin(), a.data().end());
  for (long i = 0; i < a.numel(); ++i) out[i] -= b.data()[i];
  long n = a.numel();
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [n](TensorImpl& o) {
    for (int side = 0; side < 2; ++side) {
      TensorImpl& p = *o.parents[side];
      if (!wants_grad(p)) continue;
      double* pg = p.grad_ptr();
      double sign = side == 0 ? 1.0 : -1.0;
      for (long i = 0; i < n; ++i) pg[i] += sign * o.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape("mul", a, b);
  std::vector<double> out(a.data().begin(), a.data().end());
  for (long i = 0; i < a.numel(); ++i) out[i] *= b.data()[i];
  long n = a.numel();
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [n](TensorImpl& o) {
    TensorImpl& pa = *o.parents[0];
    TensorImpl& pb = *o.parents[1];
    if (wants_grad(pa)) {
      double* pg = pa.grad_ptr();
      for (long i = 0; i < n; ++i) pg[i] += o.grad[i] * pb.data[i];
    }
    if (wants_grad(pb)) {
      double* pg = pb.grad_ptr();
      for (long i = 0; i < n; ++i) pg[i] += o.grad[i] * pa.data[i];
    }
  });
}

Tensor add_scalar(const Tensor& a, double s) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& x : out) x += s;
  return elementwise_unary(a, std::move(out), [](double, double, double g) { return g; });
}

Tensor mul_scalar(const Tensor& a, double s) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& x : out) x *= s;
  return elementwise_unary(a, std::move(out), [s](double, double, double g) { return s * g; });
}

Tensor neg(const Tensor& a) { return mul_scalar(a, -1.0); }

Tensor relu(const Tensor& a) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& x : out) x = x > 0.0 ? x : 0.0;
  return elementwise_unary(a, std::move(out),
                           [](double x, double, double g) { return x > 0.0 ? g : 0.0; });
}

Tensor sigmoid(const Tensor& a) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& x : out) x = 1.0 / (1.0 + std::exp(-x));
  return elementwise_unary(a, std::move(out),
                           [](double, double y, double g) { return g * y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& x : out) x = std::tanh(x);
  return elementwise_unary(a, std::move(out),
                           [](double, double y, double g) { return g * (1.0 - y * y); });
}

Tensor exp(const Tensor& a) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& x : out) x = std::exp(x);
  return elementwise_unary(a, std::move(out), [](double, double y, double g) { return g * y; });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() > 2 || b.rank() > 2 || a.cols() != b.rows()) {
    check_shapes(false, "matmul", a, b);
  }
  long m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<double> out(static_cast<std::size_t>(m * n));
  MatMap(out.data(), m, n).noalias() = a.mat() * b.mat();
  return Tensor::make_result({m, n}, std::move(out), {a, b}, [m, k, n](TensorImpl& o) {
    TensorImpl& pa = *o.parents[0];
    TensorImpl& pb = *o.parents[1];
    auto g = ogmap(o, m, n);
    if (wants_grad(pa)) gmap(pa, m, k).noalias() += g * vmap(pb, k, n).transpose();
    if (wants_grad(pb)) gmap(pb, k, n).noalias() += vmap(pa, m, k).transpose() * g;
  });
}

Tensor transpose(const Tensor& a) {
  long r = a.rows(), c = a.cols();
  std::vector<double> out(static_cast<std::size_t>(r * c));
  MatMap(out.data(), c, r) = a.mat().transpose();
  return Tensor::make_result({c, r}, std::move(out), {a}, [r, c](TensorImpl& o) {
    TensorImpl& p = *o.parents[0];
    if (wants_grad(p)) gmap(p, r, c) += ogmap(o, c, r).transpose();
  });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  Tensor y = matmul(x, w);
  return b.defined() ? add_rowvec(y, b) : y;
}

Tensor add_rowvec(const Tensor& x, const Tensor& v) {
  check_shapes(v.rows() == 1 && v.cols() == x.cols(), "add_rowvec", x, v);
  long r = x.rows(), c = x.cols();
  std::vector<double> out(static_cast<std::size_t>(r * c));
  MatMap(out.data(), r, c) = x.mat().rowwise() + v.mat().row(0);
  return Tensor::make_result(x.shape(), std::move(out), {x, v}, [r, c](TensorImpl& o) {
    TensorImpl& px = *o.parents[0];
    TensorImpl& pv = *o.parents[1];
    auto g = ogmap(o, r, c);
    if (wants_grad(px)) gmap(px, r, c) += g;
    if (wants_grad(pv)) gmap(pv, 1, c).row(0) += g.colwise().sum();
  });
}

Tensor scale_rows(const Tensor& x, const Tensor& s) {
  check_shapes(s.cols() == 1 && s.rows() == x.rows(), "scale_rows", x, s);
  long r = x.rows(), c = x.cols();
  std::vector<double> out(static_cast<std::size_t>(r * c));
  MatMap(out.data(), r, c) = x.mat().array().colwise() * ConstVecMap(s.data().data(), r).array();
  return Tensor::make_result(x.shape(), std::move(out), {x, s}, [r, c](TensorImpl& o) {
    TensorImpl& px = *o.parents[0];
    TensorImpl& ps = *o.parents[1];
    auto g = ogmap(o, r, c);
    if (wants_grad(px)) {
      gmap(px, r, c).array() += g.array().colwise() * ConstVecMap(ps.data.data(), r).array();
    }
    if (wants_grad(ps)) {
      auto xv = vmap(px, r, c);
      auto sg = gmap(ps, r, 1);
      for (long i = 0; i < r; ++i) sg(i, 0) += g.row(i).dot(xv.row(i));
    }
  });
}

Tensor concat(const std::vector<Tensor>& parts, int axis) {
  check_axis(axis);
  if (parts.empty()) throw ShapeError("concat: no inputs");
  long rows0 = parts[0].rows(), cols0 = parts[0].cols();
  long total = 0;
  for (const Tensor& p : parts) {
    if (axis == 0) {
      check_shapes(p.cols() == cols0, "concat", parts[0], p);
      total += p.rows();
    } else {
      check_shapes(p.rows() == rows0, "concat", parts[0], p);
      total += p.cols();
    }
  }
  long r = axis == 0 ? total : rows0;
  long c = axis == 0 ? cols0 : total;
  std::vector<double> out(static_cast<std::size_t>(r * c));
  MatMap om(out.data(), r, c);
  std::vector<long> offsets;
  long off = 0;
  for (const Tensor& p : parts) {
    offsets.push_back(off);
    if (axis == 0) {
      om.middleRows(off, p.rows()) = p.mat();
      off += p.rows();
    } else {
      om.middleCols(off, p.cols()) = p.mat();
      off += p.cols();
    }
  }
  return Tensor::make_result({r, c}, std::move(out), parts,
                             [axis, r, c, offsets](TensorImpl& o) {
                               auto g = ogmap(o, r, c);
                               for (std::size_t i = 0; i < o.parents.size(); ++i) {
                                 TensorImpl& p = *o.parents[i];
                                 if (!wants_grad(p)) continue;
                                 long pr = axis == 0 ? (i + 1 < offsets.size() ? offsets[i + 1] : r) - offsets[i] : r;
                                 long pc = axis == 1 ? (i + 1 < offsets.size() ? offsets[i + 1] : c) - offsets[i] : c;
                                 if (axis == 0) {
                                   gmap(p, pr, pc) += g.middleRows(offsets[i], pr);
                                 } else {
                                   gmap(p, pr, pc) += g.middleCols(offsets[i], pc);
                                 }
                               }
                             });
}

Tensor slice(const Tensor& x, int axis, long start, long len) {
  check_axis(axis);
  long r = x.rows(), c = x.cols();
  long extent = axis == 0 ? r : c;
  if (start < 0 || len < 1 || start + len > extent) {
    throw ShapeError("slice: range [" + std::to_string(start) + ", " +
                     std::to_string(start + len) + ") out of bounds for " + x.shape_str());
  }
  long orows = axis == 0 ? len : r;
  long ocols = axis == 1 ? len : c;
  std::vector<double> out(static_cast<std::size_t>(orows * ocols));
  if (axis == 0) {
    MatMap(out.data(), orows, ocols) = x.mat().middleRows(start, len);
  } else {
    MatMap(out.data(), orows, ocols) = x.mat().middleCols(start, len);
  }
  return Tensor::make_result({orows, ocols}, std::move(out), {x},
                             [axis, start, len, r, c, orows, ocols](TensorImpl& o) {
                               TensorImpl& p = *o.parents[0];
                               if (!wants_grad(p)) return;
                               auto g = ogmap(o, orows, ocols);
                               if (axis == 0) {
                                 gmap(p, r, c).middleRows(start, len) += g;
                               } else {
                                 gmap(p, r, c).middleCols(start, len) += g;
                               }
                             });
}

Tensor gather_rows(const Tensor& x, const std::vector<long>& indices) {
  long r = x.rows(), c = x.cols();
  for (long i : indices) {
    if (i < 0 || i >= r) throw ShapeError("gather_rows: index " + std::to_string(i) +
                                          " out of range for " + x.shape_str());
  }
  long n = static_cast<long>(indices.size());
  std::vector<double> out(static_cast<std::size_t>(n * c));
  MatMap om(out.data(), n, c);
  auto xm = x.mat();
  for (long j = 0; j < n; ++j) om.row(j) = xm.row(indices[static_cast<std::size_t>(j)]);
  return Tensor::make_result({n, c}, std::move(out), {x}, [indices, r, c, n](TensorImpl& o) {
    TensorImpl& p = *o.parents[0];
    if (!wants_grad(p)) return;
    auto g = ogmap(o, n, c);
    auto pg = gmap(p, r, c);
    for (long j = 0; j < n; ++j) pg.row(indices[static_cast<std::size_t>(j)]) += g.row(j);
  });
}

Tensor masked_fill(const Tensor& x, const Tensor& mask, double value) {
  check_same_shape("masked_fill", x, mask);
  long n = x.numel();
  std::vector<double> out(x.data().begin(), x.data().end());
  for (long i = 0; i < n; ++i) {
    if (mask.data()[i] != 0.0) out[i] = value;
  }
  Tensor mask_const = mask.detached();
  return Tensor::make_result(x.shape(), std::move(out), {x, mask_const}, [n](TensorImpl& o) {
    TensorImpl& px = *o.parents[0];
    TensorImpl& pm = *o.parents[1];
    if (!wants_grad(px)) return;
    double* pg = px.grad_ptr();
    for (long i = 0; i < n; ++i) {
      if (pm.data[i] == 0.0) pg[i] += o.grad[i];
    }
  });
}

Tensor reshape(const Tensor& x, std::vector<long> shape) {
  long n = 1;
  for (long d : shape) n *= d;
  if (n != x.numel()) {
    throw ShapeError("reshape: cannot view " + x.shape_str() + " with " +
                     std::to_string(x.numel()) + " elements as a " + std::to_string(n) +
                     "-element shape");
  }
  std::vector<double> out(x.data().begin(), x.data().end());
  long count = x.numel();
  return Tensor::make_result(std::move(shape), std::move(out), {x}, [count](TensorImpl& o) {
    TensorImpl& p = *o.parents[0];
    if (!wants_grad(p)) return;
    double* pg = p.grad_ptr();
    for (long i = 0; i < count; ++i) pg[i] += o.grad[i];
  });
}

Tensor sum(const Tensor& x) {
  double total = 0.0;
  for (double v : x.data()) total += v;
  long n = x.numel();
  return Tensor::make_result({1, 1}, {total}, {x}, [n](TensorImpl& o) {
    TensorImpl& p = *o.parents[0];
    if (!wants_grad(p)) return;
    double* pg = p.grad_ptr();
    for (long i = 0; i < n; ++i) pg[i] += o.grad[0];
  });
}

Tensor mean(const Tensor& x) { return mul_scalar(sum(x), 1.0 / static_cast<double>(x.numel())); }

Tensor row_mean(const Tensor& x) {
  long r = x.rows(), c = x.cols();
  std::vector<double> out(static_cast<std::size_t>(r));
  VecMap(out.data(), r) = x.mat().rowwise().mean();
  return Tensor::make_result({r, 1}, std::move(out), {x}, [r, c](TensorImpl& o) {
    TensorImpl& p = *o.parents[0];
    if (!wants_grad(p)) return;
    auto pg = gmap(p, r, c);
    for (long i = 0; i < r; ++i) pg.row(i).array() += o.grad[static_cast<std::size_t>(i)] / c;
  });
}

Tensor col_mean(const Tensor& x) {
  long r = x.rows(), c = x.cols();
  std::vector<double> out(static_cast<std::size_t>(c));
  MatMap(out.data(), 1, c) = x.mat().colwise().mean();
  return Tensor::make_result({1, c}, std::move(out), {x}, [r, c](TensorImpl& o) {
    TensorImpl& p = *o.parents[0];
    if (!wants_grad(p)) return;
    auto g = ogmap(o, 1, c);
    gmap(p, r, c).rowwise() += (g.row(0) / static_cast<double>(r));
  });
}

namespace {

// Shared slice walker for axis-wise normalizations: calls fn(base, stride,
// len) for each 1-D slice along `axis`.
template <typename F>
void for_each_slice(long r, long c, int axis, F&& fn) {
  if (axis == 1) {
    for (long i = 0; i < r; ++i) fn(i * c, 1L, c);
  } else {
    for (long j = 0; j < c; ++j) fn(j, c, r);
  }
}

}  // namespace

Tensor softmax(const Tensor& x, int axis) {
  check_axis(axis);
  long r = x.rows(), c = x.cols();
  std::vector<double> out(x.data().begin(), x.data().end());
  for_each_slice(r, c, axis, [&](long base, long stride, long len) {
    double mx = out[base];
    for (long i = 1; i < len; ++i) mx = std::max(mx, out[base + i * stride]);
    double z = 0.0;
    for (long i = 0; i < len; ++i) {
      double e = std::exp(out[base + i * stride] - mx);
      out[base + i * stride] = e;
      z += e;
    }
    for (long i = 0; i < len; ++i) out[base + i * stride] /= z;
  });
  return Tensor::make_result(x.shape(), std::move(out), {x}, [r, c, axis](TensorImpl& o) {
    TensorImpl& p = *o.parents[0];
    if (!wants_grad(p)) return;
    double* pg = p.grad_ptr();
    for_each_slice(r, c, axis, [&](long base, long stride, long len) {
      double dot = 0.0;
      for (long i = 0; i < len; ++i) dot += o.grad[base + i * stride] * o.data[base + i * stride];
      for (long i = 0; i < len; ++i) {
        long k = base + i * stride;
        pg[k] += o.data[k] * (o.grad[k] - dot);
      }
    });
  });
}

Tensor log_softmax(const Tensor& x, int axis) {
  check_axis(axis);
  long r = x.rows(), c = x.cols();
  std::vector<double> out(x.data().begin(), x.data().end());
  for_each_slice(r, c, axis, [&](long base, long stride, long len) {
    double mx = out[base];
    for (long i = 1; i < len; ++i) mx = std::max(mx, out[base + i * stride]);
    double z = 0.0;
    for (long i = 0; i < len; ++i) z += std::exp(out[base + i * stride] - mx);
    double lz = mx + std::log(z);
    for (long i = 0; i < len; ++i) out[base + i * stride] -= lz;
  });
  return Tensor::make_result(x.shape(), std::move(out), {x}, [r, c, axis](TensorImpl& o) {
    TensorImpl& p = *o.parents[0];
    if (!wants_grad(p)) return;
    double* pg = p.grad_ptr();
    for_each_slice(r, c, axis, [&](long base, long stride, long len) {
      double gsum = 0.0;
      for (long i = 0; i < len; ++i) gsum += o.grad[base + i * stride];
      for (long i = 0; i < len; ++i) {
        long k = base + i * stride;
        pg[k] += o.grad[k] - std::exp(o.data[k]) * gsum;
      }
    });
  });
}

Tensor layer_norm(const Tensor& x, int axis, const Tensor& gamma, const Tensor& beta,
                  double eps) {
  check_axis(axis);
  long r = x.rows(), c = x.cols();
  long slice_len = axis == 1 ? c : r;
  if (gamma.defined()) {
    check_shapes(gamma.rows() == 1 && gamma.cols() == slice_len, "layer_norm", x, gamma);
  }
  if (beta.defined()) {
    check_shapes(beta.rows() == 1 && beta.cols() == slice_len, "layer_norm", x, beta);
  }
  // xhat is needed by the backward pass; recomputing it there from the
  // output would entangle the affine parameters, so stash it.
  auto xhat = std::make_shared<std::vector<double>>(x.data().begin(), x.data().end());
  auto inv_std = std::make_shared<std::vector<double>>();
  std::vector<double> out(x.numel());
  for_each_slice(r, c, axis, [&](long base, long stride, long len) {
    double mu = 0.0;
    for (long i = 0; i < len; ++i) mu += (*xhat)[base + i * stride];
    mu /= static_cast<double>(len);
    double var = 0.0;
    for (long i = 0; i < len; ++i) {
      double d = (*xhat)[base + i * stride] - mu;
      var += d * d;
    }
    var /= static_cast<double>(len);
    double is = 1.0 / std::sqrt(var + eps);
    inv_std->push_back(is);
    for (long i = 0; i < len; ++i) {
      long k = base + i * stride;
      double h = ((*xhat)[k] - mu) * is;
      (*xhat)[k] = h;
      double v = h;
      if (gamma.defined()) v *= gamma.data()[static_cast<std::size_t>(i)];
      if (beta.defined()) v += beta.data()[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(k)] = v;
    }
  });
  std::vector<Tensor> parents = {x};
  int gamma_idx = -1, beta_idx = -1;
  if (gamma.defined()) {
    gamma_idx = static_cast<int>(parents.size());
    parents.push_back(gamma);
  }
  if (beta.defined()) {
    beta_idx = static_cast<int>(parents.size());
    parents.push_back(beta);
  }
  return Tensor::make_result(
      x.shape(), std::move(out), std::move(parents),
      [r, c, axis, xhat, inv_std, gamma_idx, beta_idx](TensorImpl& o) {
        TensorImpl& px = *o.parents[0];
        const std::vector<double>* gamma_data = nullptr;
        if (gamma_idx >= 0) gamma_data = &o.parents[static_cast<std::size_t>(gamma_idx)]->data;
        long slice_no = 0;
        for_each_slice(r, c, axis, [&](long base, long stride, long len) {
          double is = (*inv_std)[static_cast<std::size_t>(slice_no++)];
          // ghat = dL/dxhat; then dL/dx = is * (ghat - mean(ghat) - xhat*mean(ghat.xhat))
          double mean_g = 0.0, mean_gh = 0.0;
          for (long i = 0; i < len; ++i) {
            long k = base + i * stride;
            double gh = o.grad[k];
            if (gamma_data) gh *= (*gamma_data)[static_cast<std::size_t>(i)];
            mean_g += gh;
            mean_gh += gh * (*xhat)[k];
          }
          mean_g /= static_cast<double>(len);
          mean_gh /= static_cast<double>(len);
          if (wants_grad(px)) {
            double* pg = px.grad_ptr();
            for (long i = 0; i < len; ++i) {
              long k = base + i * stride;
              double gh = o.grad[k];
              if (gamma_data) gh *= (*gamma_data)[static_cast<std::size_t>(i)];
              pg[k] += is * (gh - mean_g - (*xhat)[k] * mean_gh);
            }
          }
          if (gamma_idx >= 0 && wants_grad(*o.parents[static_cast<std::size_t>(gamma_idx)])) {
            double* gg = o.parents[static_cast<std::size_t>(gamma_idx)]->grad_ptr();
            for (long i = 0; i < len; ++i) {
              long k = base + i * stride;
              gg[i] += o.grad[k] * (*xhat)[k];
            }
          }
          if (beta_idx >= 0 && wants_grad(*o.parents[static_cast<std::size_t>(beta_idx)])) {
            double* bg = o.parents[static_cast<std::size_t>(beta_idx)]->grad_ptr();
            for (long i = 0; i < len; ++i) bg[i] += o.grad[base + i * stride];
          }
        });
      });
}

Tensor conv1d(const Tensor& x, const Tensor& kernel, const Tensor& bias, long stride) {
  if (x.rank() != 2) throw ShapeError("conv1d: input must be T x c_in, got " + x.shape_str());
  if (kernel.rank() != 3) {
    throw ShapeError("conv1d: kernel must be c_out x c_in x k, got " + kernel.shape_str());
  }
  long t_in = x.rows(), c_in = x.cols();
  long c_out = kernel.dim(0), kc_in = kernel.dim(1), k = kernel.dim(2);
  if (t_in < 1) throw ShapeError("conv1d: empty input");
  if (stride < 1) throw ShapeError("conv1d: stride must be >= 1");
  check_shapes(kc_in == c_in, "conv1d", x, kernel);
  if (bias.defined()) check_shapes(bias.rows() == 1 && bias.cols() == c_out, "conv1d", x, bias);

  long t_out = (t_in + stride - 1) / stride;  // same padding: ceil(T / stride)
  long pad_total = std::max((t_out - 1) * stride + k - t_in, 0L);
  long pad_left = pad_total / 2;

  std::vector<double> out(static_cast<std::size_t>(t_out * c_out), 0.0);
  const double* xd = x.data().data();
  const double* wd = kernel.data().data();
  for (long t = 0; t < t_out; ++t) {
    for (long o = 0; o < c_out; ++o) {
      double acc = bias.defined() ? bias.data()[static_cast<std::size_t>(o)] : 0.0;
      for (long j = 0; j < k; ++j) {
        long src = t * stride - pad_left + j;
        if (src < 0 || src >= t_in) continue;
        const double* xrow = xd + src * c_in;
        const double* wrow = wd + (o * c_in * k) + j;  // stride k over c_in
        for (long ci = 0; ci < c_in; ++ci) acc += wrow[ci * k] * xrow[ci];
      }
      out[static_cast<std::size_t>(t * c_out + o)] = acc;
    }
  }

  std::vector<Tensor> parents = {x, kernel};
  bool has_bias = bias.defined();
  if (has_bias) parents.push_back(bias);
  return Tensor::make_result(
      {t_out, c_out}, std::move(out), std::move(parents),
      [t_in, c_in, c_out, k, stride, pad_left, t_out, has_bias](TensorImpl& o) {
        TensorImpl& px = *o.parents[0];
        TensorImpl& pw = *o.parents[1];
        const double* xd = px.data.data();
        const double* wd = pw.data.data();
        double* xg = wants_grad(px) ? px.grad_ptr() : nullptr;
        double* wg = wants_grad(pw) ? pw.grad_ptr() : nullptr;
        double* bg = has_bias && wants_grad(*o.parents[2]) ? o.parents[2]->grad_ptr() : nullptr;
        for (long t = 0; t < t_out; ++t) {
          for (long oc = 0; oc < c_out; ++oc) {
            double g = o.grad[static_cast<std::size_t>(t * c_out + oc)];
            if (g == 0.0) continue;
            if (bg) bg[oc] += g;
            for (long j = 0; j < k; ++j) {
              long src = t * stride - pad_left + j;
              if (src < 0 || src >= t_in) continue;
              for (long ci = 0; ci < c_in; ++ci) {
                if (xg) xg[src * c_in + ci] += g * wd[oc * c_in * k + ci * k + j];
                if (wg) wg[oc * c_in * k + ci * k + j] += g * xd[src * c_in + ci];
              }
            }
          }
        }
      });
}

Tensor cross_entropy_from_logits(const Tensor& logits, long target) {
  if (logits.rows() != 1) {
    throw ShapeError("cross_entropy_from_logits: expected a 1 x N row, got " + logits.shape_str());
  }
  if (target < 0 || target >= logits.cols()) {
    throw ShapeError("cross_entropy_from_logits: target " + std::to_string(target) +
                     " out of range for " + logits.shape_str());
  }
  Tensor ls = log_softmax(logits, 1);
  Tensor picked = slice(ls, 1, target, 1);
  return neg(picked);
}

Tensor binary_cross_entropy(const Tensor& p, const Tensor& y, double eps) {
  check_same_shape("binary_cross_entropy", p, y);
  long n = p.numel();
  double total = 0.0;
  for (long i = 0; i < n; ++i) {
    double pi = std::clamp(p.data()[i], eps, 1.0 - eps);
    double yi = y.data()[i];
    total -= yi * std::log(pi) + (1.0 - yi) * std::log(1.0 - pi);
  }
  Tensor labels = y.detached();
  return Tensor::make_result({1, 1}, {total}, {p, labels}, [n, eps](TensorImpl& o) {
    TensorImpl& pp = *o.parents[0];
    TensorImpl& py = *o.parents[1];
    if (!wants_grad(pp)) return;
    double* pg = pp.grad_ptr();
    for (long i = 0; i < n; ++i) {
      double pi = std::clamp(pp.data[i], eps, 1.0 - eps);
      double yi = py.data[i];
      pg[i] += o.grad[0] * (-yi / pi + (1.0 - yi) / (1.0 - pi));
    }
  });
}

}  // namespace svg
