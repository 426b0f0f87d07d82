// svg/signal.hpp

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
#include <vector>

#include "svg/base.hpp"
#include "svg/rng.hpp"

namespace svg {

inline constexpr int kSampleRate = 16000;
inline constexpr int kWindowSamples = 400;  // 25 ms
inline constexpr int kHopSamples = 160;     // 10 ms
inline constexpr int kFftSize = 512;
inline constexpr int kMelBands = 128;
inline constexpr double kLogMelEps = 1e-6;

struct Waveform {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = kSampleRate;
};

struct MelSpectrogram {
  Mat frames;  // T x 128 log energies
};

struct NoiseSpec {
  Waveform noise;
  double alpha_lo = 0.5;
  double alpha_hi = 0.7;
};

/// 16-bit PCM RIFF reader. Stereo is averaged to mono; anything other than
/// 16 kHz PCM16 is rejected (no resampling).
Waveform read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Waveform& w);

/// Triangular filterbank on the HTK mel scale, kMelBands x (kFftSize/2 + 1).
/// Weights are the mean of each triangle over the bin's frequency interval
/// rather than point samples, so every filter has positive mass even where
/// triangles are narrower than a bin.
Mat mel_filterbank();

/// Hamming-window magnitude STFT -> mel filterbank -> ln(. + eps).
/// Frame count is floor((n - 400) / 160) + 1; inputs shorter than one
/// window are rejected.
MelSpectrogram log_mel(const Waveform& w);

double rms(const std::vector<double>& samples);

/// Adds an rms-scaled copy of the noise clip over one uniformly placed
/// contiguous segment: out = speech + alpha * (rms(speech)/rms(noise)) * noise
/// with alpha ~ U(alpha_lo, alpha_hi), clipped to [-1, 1].
Waveform mix_noise(const Waveform& speech, const NoiseSpec& spec, Rng& rng);

struct SampledSpectrogram {
  Mat frames;        // n_frames x 128
  long valid_frames; // < n_frames when the input was zero-padded
};

/// Uniform temporal subsampling to exactly n_frames rows (indices
/// floor(k*T/n)), or zero-padding at the end when T < n_frames.
SampledSpectrogram sample_fixed(const Mat& frames, long n_frames);

/// Procedural stand-ins for environmental noise recordings; five families
/// (colored noise, AM tones, impulse trains, chirp sweeps, gated bursts).
inline constexpr int kNoiseFamilies = 5;
Waveform synth_noise_clip(int family, double seconds, Rng& rng);

/// Ingestion path for real noise banks: every *.wav under dir, 16 kHz.
std::vector<Waveform> load_noise_dir(const std::filesystem::path& dir);

}  // namespace svg
