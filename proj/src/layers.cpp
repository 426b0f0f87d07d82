// svg/layers.cpp

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

#include "svg/layers.hpp"

#include <cmath>

namespace svg {

Linear::Linear(ParamStore& store, const std::string& prefix, long in, long out, Rng& rng,
               bool bias) {
  w = store.create(prefix + ".w", {in, out}, glorot_bound(in, out), rng);
  if (bias) b = store.create(prefix + ".b", {1, out}, 0.0, rng);
}

Conv1dLayer::Conv1dLayer(ParamStore& store, const std::string& prefix, long c_in, long c_out,
                         long k, long stride_, Rng& rng)
    : stride(stride_) {
  w = store.create(prefix + ".w", {c_out, c_in, k}, glorot_bound(c_in * k, c_out * k), rng);
  b = store.create(prefix + ".b", {1, c_out}, 0.0, rng);
}

GruCell::GruCell(ParamStore& store, const std::string& prefix, long in, long h, Rng& rng)
    : hidden(h) {
  const double bi = glorot_bound(in, h);
  const double bh = glorot_bound(h, h);
  wr = store.create(prefix + ".wr", {in, h}, bi, rng);
  wz = store.create(prefix + ".wz", {in, h}, bi, rng);
  wn = store.create(prefix + ".wn", {in, h}, bi, rng);
  ur = store.create(prefix + ".ur", {h, h}, bh, rng);
  uz = store.create(prefix + ".uz", {h, h}, bh, rng);
  un = store.create(prefix + ".un", {h, h}, bh, rng);
  br = store.create(prefix + ".br", {1, h}, 0.0, rng);
  bz = store.create(prefix + ".bz", {1, h}, 0.0, rng);
  bn = store.create(prefix + ".bn", {1, h}, 0.0, rng);
}

Tensor GruCell::step(const Tensor& x, const Tensor& h) const {
  Tensor r = sigmoid(add_rowvec(add(matmul(x, wr), matmul(h, ur)), br));
  Tensor u = sigmoid(add_rowvec(add(matmul(x, wz), matmul(h, uz)), bz));
  Tensor n = tanh(add_rowvec(add(matmul(x, wn), matmul(mul(r, h), un)), bn));
  // u*h + (1-u)*n
  return add(n, mul(u, sub(h, n)));
}

Tensor Gru::forward_seq(const Tensor& seq) const {
  long t_len = seq.rows();
  // Input projections for the whole sequence at once; biases folded in.
  Tensor xr = add_rowvec(matmul(seq, cell.wr), cell.br);
  Tensor xz = add_rowvec(matmul(seq, cell.wz), cell.bz);
  Tensor xn = add_rowvec(matmul(seq, cell.wn), cell.bn);
  Tensor h = Tensor::zeros({1, cell.hidden});
  std::vector<Tensor> outputs;
  outputs.reserve(static_cast<std::size_t>(t_len));
  for (long t = 0; t < t_len; ++t) {
    Tensor r = sigmoid(add(slice(xr, 0, t, 1), matmul(h, cell.ur)));
    Tensor u = sigmoid(add(slice(xz, 0, t, 1), matmul(h, cell.uz)));
    Tensor n = tanh(add(slice(xn, 0, t, 1), matmul(mul(r, h), cell.un)));
    h = add(n, mul(u, sub(h, n)));
    outputs.push_back(h);
  }
  return concat(outputs, 0);
}

std::vector<Tensor> Gru::forward_steps(const std::vector<Tensor>& xs) const {
  std::vector<Tensor> outputs;
  outputs.reserve(xs.size());
  if (xs.empty()) return outputs;
  Tensor h = Tensor::zeros({xs[0].rows(), cell.hidden});
  for (const Tensor& x : xs) {
    h = cell.step(x, h);
    outputs.push_back(h);
  }
  return outputs;
}

BiGru::BiGru(ParamStore& store, const std::string& prefix, long in, long h, Rng& rng) {
  if (h % 2 != 0) throw ShapeError("bigru: hidden width must be even, got " + std::to_string(h));
  fwd = GruCell(store, prefix + ".fwd", in, h / 2, rng);
  bwd = GruCell(store, prefix + ".bwd", in, h / 2, rng);
}

Tensor BiGru::forward_seq(const Tensor& seq) const {
  long t_len = seq.rows();
  Tensor hf = Tensor::zeros({1, fwd.hidden});
  Tensor hb = Tensor::zeros({1, bwd.hidden});
  std::vector<Tensor> front(static_cast<std::size_t>(t_len));
  std::vector<Tensor> back(static_cast<std::size_t>(t_len));
  for (long t = 0; t < t_len; ++t) {
    hf = fwd.step(slice(seq, 0, t, 1), hf);
    front[static_cast<std::size_t>(t)] = hf;
  }
  for (long t = t_len - 1; t >= 0; --t) {
    hb = bwd.step(slice(seq, 0, t, 1), hb);
    back[static_cast<std::size_t>(t)] = hb;
  }
  std::vector<Tensor> rows;
  rows.reserve(static_cast<std::size_t>(t_len));
  for (long t = 0; t < t_len; ++t) {
    rows.push_back(concat({front[static_cast<std::size_t>(t)], back[static_cast<std::size_t>(t)]}, 1));
  }
  return concat(rows, 0);
}

LayerNormLayer::LayerNormLayer(ParamStore& store, const std::string& prefix, long d) {
  gamma = store.create_const(prefix + ".gamma", {1, d}, 1.0);
  beta = store.create_const(prefix + ".beta", {1, d}, 0.0);
}

FeedForward::FeedForward(ParamStore& store, const std::string& prefix, long d_in, long d_hidden,
                         long d_out, Rng& rng)
    : in(store, prefix + ".in", d_in, d_hidden, rng),
      out(store, prefix + ".out", d_hidden, d_out, rng) {}

MultiHeadSelfAttention::MultiHeadSelfAttention(ParamStore& store, const std::string& prefix,
                                               long d, long heads_, Rng& rng)
    : heads(heads_) {
  if (d % heads_ != 0) {
    throw ShapeError("selfattn: width " + std::to_string(d) + " not divisible by " +
                     std::to_string(heads_) + " heads");
  }
  q = Linear(store, prefix + ".q", d, d, rng, false);
  k = Linear(store, prefix + ".k", d, d, rng, false);
  v = Linear(store, prefix + ".v", d, d, rng, false);
  o = Linear(store, prefix + ".o", d, d, rng, false);
}

Tensor MultiHeadSelfAttention::operator()(const Tensor& x) const {
  long d = x.cols();
  long dh = d / heads;
  Tensor qs = q(x), ks = k(x), vs = v(x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<Tensor> head_outs;
  head_outs.reserve(static_cast<std::size_t>(heads));
  for (long h = 0; h < heads; ++h) {
    Tensor qh = slice(qs, 1, h * dh, dh);
    Tensor kh = slice(ks, 1, h * dh, dh);
    Tensor vh = slice(vs, 1, h * dh, dh);
    Tensor scores = mul_scalar(matmul(qh, transpose(kh)), scale);
    Tensor weights = softmax(scores, 1);
    head_outs.push_back(matmul(weights, vh));
  }
  return o(concat(head_outs, 1));
}

TransformerEncoderLayer::TransformerEncoderLayer(ParamStore& store, const std::string& prefix,
                                                 long d, long heads, long ffn_hidden, Rng& rng)
    : attn(store, prefix + ".attn", d, heads, rng),
      ffn(store, prefix + ".ffn", d, ffn_hidden, d, rng),
      ln1(store, prefix + ".ln1", d),
      ln2(store, prefix + ".ln2", d) {}

Tensor TransformerEncoderLayer::operator()(const Tensor& x) const {
  Tensor y = ln1(add(x, attn(x)));
  return ln2(add(y, ffn(y)));
}

}  // namespace svg
