// svg/signal.cpp

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

#include "svg/signal.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace svg {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename T>
T read_pod(std::istream& is, const char* what) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DataError(std::string("wav: unexpected end of file reading ") + what);
  return v;
}

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// Integral of the triangle (l, c, r) over [a, b], computed exactly by
// splitting at the breakpoints (the triangle is piecewise linear).
double triangle_integral(double l, double c, double r, double a, double b) {
  auto tri = [&](double f) {
    if (f <= l || f >= r) return 0.0;
    return f <= c ? (f - l) / (c - l) : (r - f) / (r - c);
  };
  double pts[4] = {a, std::clamp(l, a, b), std::clamp(c, a, b), std::clamp(r, a, b)};
  std::sort(pts, pts + 4);
  double total = 0.0;
  double prev = a;
  for (double p : pts) {
    if (p > prev) total += 0.5 * (tri(prev) + tri(p)) * (p - prev);
    prev = p;
  }
  if (b > prev) total += 0.5 * (tri(prev) + tri(b)) * (b - prev);
  return total;
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open wav file '" + path.string() + "'");
  char tag[4];
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "RIFF", 4) != 0) {
    throw DataError("'" + path.string() + "': not a RIFF file");
  }
  read_pod<std::uint32_t>(is, "riff size");
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "WAVE", 4) != 0) {
    throw DataError("'" + path.string() + "': not a WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::vector<std::int16_t> pcm;
  bool have_data = false;

  while (is.peek() != EOF) {
    is.read(tag, 4);
    if (!is) break;
    auto chunk_size = read_pod<std::uint32_t>(is, "chunk size");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw DataError("'" + path.string() + "': malformed fmt chunk");
      format = read_pod<std::uint16_t>(is, "format");
      channels = read_pod<std::uint16_t>(is, "channels");
      rate = read_pod<std::uint32_t>(is, "sample rate");
      read_pod<std::uint32_t>(is, "byte rate");
      read_pod<std::uint16_t>(is, "block align");
      bits = read_pod<std::uint16_t>(is, "bits per sample");
      is.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      pcm.resize(chunk_size / 2);
      is.read(reinterpret_cast<char*>(pcm.data()), static_cast<std::streamsize>(chunk_size / 2 * 2));
      if (!is) throw DataError("'" + path.string() + "': truncated data chunk");
      have_data = true;
      if (chunk_size % 2) is.ignore(1);
    } else {
      is.ignore(chunk_size + (chunk_size % 2));
    }
    if (have_fmt && have_data) break;
  }
  if (!have_fmt || !have_data) {
    throw DataError("'" + path.string() + "': missing fmt or data chunk");
  }
  if (format != 1 || bits != 16) {
    throw DataError("'" + path.string() + "': only 16-bit PCM is supported");
  }
  if (channels < 1) throw DataError("'" + path.string() + "': zero channels");
  if (rate != static_cast<std::uint32_t>(kSampleRate)) {
    throw DataError("'" + path.string() + "': sample rate " + std::to_string(rate) +
                    " Hz, expected 16000 Hz (no resampling)");
  }
  if (pcm.empty()) throw DataError("'" + path.string() + "': empty audio payload");

  Waveform w;
  w.sample_rate = kSampleRate;
  const std::size_t n = pcm.size() / channels;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::uint16_t ch = 0; ch < channels; ++ch) {
      acc += static_cast<double>(pcm[i * channels + ch]);
    }
    w.samples[i] = acc / channels / 32768.0;
  }
  return w;
}

void write_wav(const std::filesystem::path& path, const Waveform& w) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open '" + path.string() + "' for writing");
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  os.write("RIFF", 4);
  write_pod<std::uint32_t>(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  write_pod<std::uint32_t>(os, 16);
  write_pod<std::uint16_t>(os, 1);  // PCM
  write_pod<std::uint16_t>(os, 1);  // mono
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(w.sample_rate));
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(w.sample_rate * 2));
  write_pod<std::uint16_t>(os, 2);
  write_pod<std::uint16_t>(os, 16);
  os.write("data", 4);
  write_pod<std::uint32_t>(os, data_bytes);
  for (double s : w.samples) {
    double clamped = std::clamp(s, -1.0, 1.0);
    auto v = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
    write_pod(os, v);
  }
  if (!os) throw DataError("write failed for '" + path.string() + "'");
}

Mat mel_filterbank() {
  const int n_bins = kFftSize / 2 + 1;
  const double f_max = kSampleRate / 2.0;
  const double bin_width = static_cast<double>(kSampleRate) / kFftSize;
  const double mel_max = hz_to_mel(f_max);

  std::vector<double> centers_hz(kMelBands + 2);
  for (int m = 0; m < kMelBands + 2; ++m) {
    centers_hz[m] = mel_to_hz(mel_max * m / (kMelBands + 1));
  }

  Mat fb = Mat::Zero(kMelBands, n_bins);
  for (int m = 0; m < kMelBands; ++m) {
    const double l = centers_hz[m], c = centers_hz[m + 1], r = centers_hz[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f_k = k * bin_width;
      const double a = std::max(0.0, f_k - bin_width / 2);
      const double b = std::min(f_max, f_k + bin_width / 2);
      if (b <= a) continue;
      fb(m, k) = triangle_integral(l, c, r, a, b) / (b - a);
    }
  }
  return fb;
}

MelSpectrogram log_mel(const Waveform& w) {
  const long n = static_cast<long>(w.samples.size());
  if (n < kWindowSamples) {
    throw DataError("log_mel: input of " + std::to_string(n) +
                    " samples is shorter than one 400-sample window");
  }
  const long t_frames = (n - kWindowSamples) / kHopSamples + 1;

  static const Mat fb = mel_filterbank();  // 128 x 257

  std::vector<double> window(kWindowSamples);
  for (int i = 0; i < kWindowSamples; ++i) {
    window[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (kWindowSamples - 1));
  }

  Eigen::FFT<double> fft;
  std::vector<double> frame(kFftSize, 0.0);
  std::vector<std::complex<double>> spectrum(kFftSize);
  const int n_bins = kFftSize / 2 + 1;
  Eigen::VectorXd mag(n_bins);

  MelSpectrogram out;
  out.frames.resize(t_frames, kMelBands);
  for (long t = 0; t < t_frames; ++t) {
    const double* src = w.samples.data() + t * kHopSamples;
    for (int i = 0; i < kWindowSamples; ++i) frame[static_cast<std::size_t>(i)] = src[i] * window[i];
    std::fill(frame.begin() + kWindowSamples, frame.end(), 0.0);
    fft.fwd(spectrum, frame);
    for (int k = 0; k < n_bins; ++k) mag(k) = std::abs(spectrum[static_cast<std::size_t>(k)]);
    out.frames.row(t) = ((fb * mag).array() + kLogMelEps).log().transpose();
  }
  return out;
}

double rms(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

Waveform mix_noise(const Waveform& speech, const NoiseSpec& spec, Rng& rng) {
  if (speech.sample_rate != spec.noise.sample_rate) {
    throw DataError("mix_noise: sample rates differ (" + std::to_string(speech.sample_rate) +
                    " vs " + std::to_string(spec.noise.sample_rate) + ")");
  }
  if (speech.samples.empty()) throw DataError("mix_noise: empty speech");
  const double noise_rms = rms(spec.noise.samples);
  if (noise_rms == 0.0) throw DataError("mix_noise: silent noise clip (rms = 0)");

  const double alpha = rng.uniform(spec.alpha_lo, spec.alpha_hi);
  const long seg = std::min(spec.noise.samples.size(), speech.samples.size());
  const long offset = rng.uniform_int(0, static_cast<long>(speech.samples.size()) - seg);
  const double scale = alpha * rms(speech.samples) / noise_rms;

  Waveform out = speech;
  for (long i = 0; i < seg; ++i) {
    double v = out.samples[static_cast<std::size_t>(offset + i)] +
               scale * spec.noise.samples[static_cast<std::size_t>(i)];
    out.samples[static_cast<std::size_t>(offset + i)] = std::clamp(v, -1.0, 1.0);
  }
  return out;
}

SampledSpectrogram sample_fixed(const Mat& frames, long n_frames) {
  const long t = frames.rows();
  if (t < 1) throw DataError("sample_fixed: empty spectrogram");
  SampledSpectrogram out;
  out.frames = Mat::Zero(n_frames, frames.cols());
  if (t >= n_frames) {
    for (long k = 0; k < n_frames; ++k) {
      out.frames.row(k) = frames.row(k * t / n_frames);
    }
    out.valid_frames = n_frames;
  } else {
    out.frames.topRows(t) = frames;
    out.valid_frames = t;
  }
  return out;
}

Waveform synth_noise_clip(int family, double seconds, Rng& rng) {
  if (family < 0 || family >= kNoiseFamilies) {
    throw DataError("synth_noise_clip: unknown family " + std::to_string(family));
  }
  const long n = std::max<long>(1, std::lround(seconds * kSampleRate));
  Waveform w;
  w.samples.assign(static_cast<std::size_t>(n), 0.0);
  switch (family) {
    case 0: {  // one-pole lowpassed white noise
      const double a = rng.uniform(0.05, 0.5);
      double y = 0.0;
      for (long i = 0; i < n; ++i) {
        y = (1.0 - a) * y + a * rng.uniform(-1.0, 1.0);
        w.samples[static_cast<std::size_t>(i)] = y;
      }
      break;
    }
    case 1: {  // amplitude-modulated tone
      const double carrier = rng.uniform(200.0, 3000.0);
      const double mod = rng.uniform(0.5, 8.0);
      const double phase = rng.uniform(0.0, 2.0 * kPi);
      for (long i = 0; i < n; ++i) {
        const double ts = static_cast<double>(i) / kSampleRate;
        const double env = 0.5 + 0.5 * std::sin(2.0 * kPi * mod * ts + phase);
        w.samples[static_cast<std::size_t>(i)] = env * std::sin(2.0 * kPi * carrier * ts);
      }
      break;
    }
    case 2: {  // impulse train with exponential ring-down
      const double rate = rng.uniform(2.0, 40.0);
      const long period = std::max<long>(1, std::lround(kSampleRate / rate));
      const double decay = rng.uniform(0.9990, 0.9999);
      double y = 0.0;
      for (long i = 0; i < n; ++i) {
        if (i % period == 0) y += rng.uniform() < 0.5 ? -1.0 : 1.0;
        w.samples[static_cast<std::size_t>(i)] = y;
        y *= decay;
      }
      break;
    }
    case 3: {  // repeated linear chirp
      const double f0 = rng.uniform(100.0, 800.0);
      const double f1 = rng.uniform(1000.0, 6000.0);
      const double sweep_s = rng.uniform(0.2, 1.0);
      const long sweep_n = std::max<long>(1, std::lround(sweep_s * kSampleRate));
      for (long i = 0; i < n; ++i) {
        const double u = static_cast<double>(i % sweep_n) / static_cast<double>(sweep_n);
        const double ts = static_cast<double>(i % sweep_n) / kSampleRate;
        const double f = f0 + (f1 - f0) * u / 2.0;
        w.samples[static_cast<std::size_t>(i)] = std::sin(2.0 * kPi * f * ts);
      }
      break;
    }
    default: {  // gated white-noise bursts
      const double p_toggle = rng.uniform(0.0005, 0.005);
      bool open = true;
      for (long i = 0; i < n; ++i) {
        if (rng.uniform() < p_toggle) open = !open;
        w.samples[static_cast<std::size_t>(i)] = open ? rng.uniform(-1.0, 1.0) : 0.0;
      }
      break;
    }
  }
  // Normalize to a fixed loudness so mixing ratios behave consistently.
  const double target = 0.1;
  const double cur = rms(w.samples);
  if (cur > 0.0) {
    for (double& s : w.samples) s = std::clamp(s * target / cur, -1.0, 1.0);
  } else {
    w.samples[0] = target;  // degenerate draw; keep the clip non-silent
  }
  return w;
}

std::vector<Waveform> load_noise_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("noise directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".wav") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Waveform> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(read_wav(p));
  if (out.empty()) throw DataError("noise directory '" + dir.string() + "' has no .wav files");
  return out;
}

}  // namespace svg
