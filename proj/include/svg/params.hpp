// svg/params.hpp

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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "svg/rng.hpp"
#include "svg/tensor.hpp"

namespace svg {

struct Parameter {
  std::string name;
  Tensor value;  // requires_grad = true
};

/// Ordered, uniquely-named registry of trainable tensors. Registration order
/// is the serialization and optimizer order, so it must be deterministic.
class ParamStore {
 public:
  /// Uniform(-bound, bound) init; bound == 0 gives zeros.
  Tensor create(const std::string& name, std::vector<long> shape, double bound, Rng& rng);
  Tensor create_const(const std::string& name, std::vector<long> shape, double value);

  bool has(const std::string& name) const { return index_.count(name) != 0; }
  const Tensor& get(const std::string& name) const;
  const std::vector<Parameter>& entries() const { return params_; }
  std::size_t size() const { return params_.size(); }

  void zero_grads();

  /// Overwrite the named parameter's data. Shape mismatch names the
  /// parameter and both shapes. Used by checkpoint loading and transplant.
  void assign(const std::string& name, const Tensor& source);

 private:
  std::vector<Parameter> params_;
  std::map<std::string, std::size_t> index_;
};

/// Uniform bound sqrt(6 / (fan_in + fan_out)).
double glorot_bound(long fan_in, long fan_out);

// Parameter checkpoint file ("VGCL" magic, little-endian f64 payloads).
// save/load round-trip bit-exactly.
void save_checkpoint(const std::filesystem::path& path, const ParamStore& store);
std::vector<Parameter> load_checkpoint(const std::filesystem::path& path);

}  // namespace svg
