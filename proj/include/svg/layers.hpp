// svg/layers.hpp

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

#include <string>
#include <vector>

#include "svg/ops.hpp"
#include "svg/params.hpp"

namespace svg {

struct Linear {
  Tensor w;  // in x out
  Tensor b;  // 1 x out, undefined when bias-free

  Linear() = default;
  Linear(ParamStore& store, const std::string& prefix, long in, long out, Rng& rng,
         bool bias = true);

  Tensor operator()(const Tensor& x) const { return linear(x, w, b); }
};

struct Conv1dLayer {
  Tensor w;  // c_out x c_in x k
  Tensor b;  // 1 x c_out
  long stride = 1;

  Conv1dLayer() = default;
  Conv1dLayer(ParamStore& store, const std::string& prefix, long c_in, long c_out, long k,
              long stride, Rng& rng);

  Tensor operator()(const Tensor& x) const { return conv1d(x, w, b, stride); }
};

/// Gated recurrent cell: r/u gates, candidate through the reset gate,
/// h' = u*h + (1-u)*n. Weights are per-gate matrices so each gate gets its
/// own fan-based init.
struct GruCell {
  Tensor wr, wz, wn;  // in x h
  Tensor ur, uz, un;  // h x h
  Tensor br, bz, bn;  // 1 x h
  long hidden = 0;

  GruCell() = default;
  GruCell(ParamStore& store, const std::string& prefix, long in, long h, Rng& rng);

  /// One step on a B x in input with B x h state.
  Tensor step(const Tensor& x, const Tensor& h) const;
};

/// Unidirectional scan from a zero initial state.
struct Gru {
  GruCell cell;

  Gru() = default;
  Gru(ParamStore& store, const std::string& prefix, long in, long h, Rng& rng)
      : cell(store, prefix, in, h, rng) {}

  /// T x in -> T x h; output row t depends only on input rows <= t.
  Tensor forward_seq(const Tensor& seq) const;

  /// Lockstep over pre-assembled steps (each B x in) -> per-step B x h.
  std::vector<Tensor> forward_steps(const std::vector<Tensor>& xs) const;
};

/// Forward and backward passes concatenated; each direction h/2 wide.
struct BiGru {
  GruCell fwd, bwd;

  BiGru() = default;
  BiGru(ParamStore& store, const std::string& prefix, long in, long h, Rng& rng);

  Tensor forward_seq(const Tensor& seq) const;  // T x in -> T x h
};

struct LayerNormLayer {
  Tensor gamma, beta;  // 1 x d
  double eps = 1e-5;

  LayerNormLayer() = default;
  LayerNormLayer(ParamStore& store, const std::string& prefix, long d);

  Tensor operator()(const Tensor& x) const { return layer_norm(x, 1, gamma, beta, eps); }
};

struct FeedForward {
  Linear in, out;

  FeedForward() = default;
  FeedForward(ParamStore& store, const std::string& prefix, long d_in, long d_hidden,
              long d_out, Rng& rng);

  Tensor operator()(const Tensor& x) const { return out(relu(in(x))); }
};

/// Scaled dot-product self-attention over a T x d sequence, h heads, with an
/// output projection.
struct MultiHeadSelfAttention {
  Linear q, k, v, o;
  long heads = 1;

  MultiHeadSelfAttention() = default;
  MultiHeadSelfAttention(ParamStore& store, const std::string& prefix, long d, long heads,
                         Rng& rng);

  Tensor operator()(const Tensor& x) const;
};

/// Post-norm transformer encoder layer: LN(x + attn(x)), LN(y + ffn(y)).
struct TransformerEncoderLayer {
  MultiHeadSelfAttention attn;
  FeedForward ffn;
  LayerNormLayer ln1, ln2;

  TransformerEncoderLayer() = default;
  TransformerEncoderLayer(ParamStore& store, const std::string& prefix, long d, long heads,
                          long ffn_hidden, Rng& rng);

  Tensor operator()(const Tensor& x) const;
};

}  // namespace svg
