// svg/params.cpp

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

#include "svg/params.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace svg {

namespace {

constexpr char kMagic[4] = {'V', 'G', 'C', 'L'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const char* what) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DataError(std::string("checkpoint: unexpected end of file reading ") + what);
  return v;
}

}  // namespace

Tensor ParamStore::create(const std::string& name, std::vector<long> shape, double bound,
                          Rng& rng) {
  if (index_.count(name)) throw DataError("parameter '" + name + "' registered twice");
  long n = 1;
  for (long d : shape) n *= d;
  std::vector<double> data(static_cast<std::size_t>(n));
  if (bound != 0.0) {
    for (double& v : data) v = rng.uniform(-bound, bound);
  }
  Tensor t = Tensor::from_data(std::move(shape), std::move(data), true);
  index_[name] = params_.size();
  params_.push_back({name, t});
  return t;
}

Tensor ParamStore::create_const(const std::string& name, std::vector<long> shape, double value) {
  if (index_.count(name)) throw DataError("parameter '" + name + "' registered twice");
  Tensor t = Tensor::full(std::move(shape), value, true);
  index_[name] = params_.size();
  params_.push_back({name, t});
  return t;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw DataError("unknown parameter '" + name + "'");
  return params_[it->second].value;
}

void ParamStore::zero_grads() {
  for (Parameter& p : params_) p.value.zero_grad();
}

void ParamStore::assign(const std::string& name, const Tensor& source) {
  auto it = index_.find(name);
  if (it == index_.end()) throw DataError("unknown parameter '" + name + "'");
  Tensor& dst = params_[it->second].value;
  if (dst.shape() != source.shape()) {
    throw ShapeError("parameter '" + name + "': expected shape " + dst.shape_str() +
                     ", got " + source.shape_str());
  }
  std::copy(source.data().begin(), source.data().end(), dst.mutable_data().begin());
}

double glorot_bound(long fan_in, long fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void save_checkpoint(const std::filesystem::path& path, const ParamStore& store) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open '" + path.string() + "' for writing");
  os.write(kMagic, 4);
  write_pod(os, kVersion);
  write_pod(os, static_cast<std::uint32_t>(store.size()));
  for (const Parameter& p : store.entries()) {
    write_pod(os, static_cast<std::uint16_t>(p.name.size()));
    os.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    write_pod(os, static_cast<std::uint8_t>(p.value.rank()));
    for (long d : p.value.shape()) write_pod(os, static_cast<std::uint32_t>(d));
    os.write(reinterpret_cast<const char*>(p.value.data().data()),
             static_cast<std::streamsize>(p.value.numel() * sizeof(double)));
  }
  if (!os) throw DataError("write failed for '" + path.string() + "'");
}

std::vector<Parameter> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint '" + path.string() + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("'" + path.string() + "' is not a parameter checkpoint (bad magic)");
  }
  auto version = read_pod<std::uint16_t>(is, "version");
  if (version != kVersion) {
    throw DataError("checkpoint version " + std::to_string(version) + " unsupported");
  }
  auto count = read_pod<std::uint32_t>(is, "parameter count");
  std::vector<Parameter> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    auto name_len = read_pod<std::uint16_t>(is, "name length");
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw DataError("checkpoint: unexpected end of file reading name");
    auto rank = read_pod<std::uint8_t>(is, "rank");
    std::vector<long> shape(rank);
    long n = 1;
    for (auto& d : shape) {
      d = static_cast<long>(read_pod<std::uint32_t>(is, "dimension"));
      n *= d;
    }
    std::vector<double> data(static_cast<std::size_t>(n));
    is.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!is) {
      throw DataError("checkpoint: unexpected end of file in payload of '" + name + "'");
    }
    out.push_back({std::move(name), Tensor::from_data(std::move(shape), std::move(data))});
  }
  return out;
}

}  // namespace svg
