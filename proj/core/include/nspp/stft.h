// nspp/stft.h
//
// Copyright 2026  nspp authors
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

#ifndef NSPP_STFT_H_
#define NSPP_STFT_H_

#include <Eigen/Core>
#include <cstdint>

#include "nspp/wav.h"

// Short-time Fourier analysis/synthesis and frame-wise differentials.
//
// Matrix convention used throughout the library: spectrogram matrices are
// Eigen::MatrixXf with rows = frequency bins (N) and columns = frames (F).
// Eigen's column-major storage then makes each frame contiguous in memory,
// which is also the on-disk layout of the PHSC dump format (frame-major,
// i.e. "row-major F x N").

namespace nspp {

enum class WindowKind { kHann, kRect };

struct StftConfig {
  int sample_rate = 16000;
  int window_length = 320;  // 20 ms at 16 kHz
  int hop_length = 80;      // 5 ms
  int fft_size = 1024;
  WindowKind window = WindowKind::kHann;
  bool centered = true;

  int bins() const { return fft_size / 2 + 1; }

  // Frame count for a signal of `num_samples` samples.
  // Centered analysis pads window_length/2 reflected samples on each side and
  // yields floor(len / hop) + 1 frames; uncentered analysis requires
  // len >= window_length and yields floor((len - window) / hop) + 1.
  long num_frames(long num_samples) const;

  // Smallest sample count whose analysis produces exactly `frames` frames.
  long canonical_length(long frames) const;

  // Throws std::invalid_argument on violated invariants
  // (hop <= window <= fft_size, fft_size a power of two, overlap-add cover).
  void validate() const;
};

struct ComplexSpectrogram {
  Eigen::MatrixXf re, im;  // bins x frames each
  int bins() const { return static_cast<int>(re.rows()); }
  long frames() const { return re.cols(); }
};

// Non-negative linear magnitudes.
struct AmplitudeSpectrogram {
  Eigen::MatrixXf v;  // bins x frames
  int bins() const { return static_cast<int>(v.rows()); }
  long frames() const { return v.cols(); }
};

// Wrapped phases, every entry in (-pi, pi].
struct PhaseSpectrogram {
  Eigen::MatrixXf v;  // bins x frames
  int bins() const { return static_cast<int>(v.rows()); }
  long frames() const { return v.cols(); }
};

// Analysis.  Throws on sample-rate mismatch or empty input.
ComplexSpectrogram stft(const Waveform& wave, const StftConfig& cfg);

// Overlap-add synthesis with per-sample window-square normalization, trimmed
// or padded to `length` samples.  `length` must be consistent with the frame
// count (num_frames(length) == spec.frames()).
Waveform istft(const ComplexSpectrogram& spec, const StftConfig& cfg, long length);

// Elementwise sqrt(re^2 + im^2).
AmplitudeSpectrogram amplitude(const ComplexSpectrogram& spec);

// Elementwise ln(max(amp, floor)); floor must be positive.
Eigen::MatrixXf log_amplitude(const AmplitudeSpectrogram& amp, float floor = 1e-5f);

// Elementwise phi(re, im); all outputs in (-pi, pi].
PhaseSpectrogram phase_of(const ComplexSpectrogram& spec);

// Forward difference along the frequency axis: out(k, f) = m(k+1, f) - m(k, f).
// Requires at least two bins; output has one row fewer.
Eigen::MatrixXf diff_freq(const Eigen::MatrixXf& m);

// Forward difference along the time axis: out(k, f) = m(k, f+1) - m(k, f).
// Requires at least two frames; output has one column fewer.
Eigen::MatrixXf diff_time(const Eigen::MatrixXf& m);

// Analysis window samples (periodic form for Hann).
Eigen::VectorXd make_window(WindowKind kind, int length);

}  // namespace nspp

#endif  // NSPP_STFT_H_
