// src/stft.cc
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

#include "nspp/stft.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nspp/phase_math.h"
#include "real_fft.h"

namespace nspp {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Reflect an out-of-range index into [0, len) without repeating the edge
// sample (x[-1] maps to x[1]).
long reflect_index(long j, long len) {
  if (len == 1) return 0;
  while (j < 0 || j >= len) {
    if (j < 0) j = -j;
    if (j >= len) j = 2 * (len - 1) - j;
  }
  return j;
}

}  // namespace

Eigen::VectorXd make_window(WindowKind kind, int length) {
  Eigen::VectorXd w(length);
  switch (kind) {
    case WindowKind::kHann:
      for (int n = 0; n < length; ++n) {
        w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
      }
      break;
    case WindowKind::kRect:
      w.setOnes();
      break;
  }
  return w;
}

long StftConfig::num_frames(long num_samples) const {
  if (num_samples < 1) throw std::invalid_argument("num_frames: empty signal");
  if (centered) return num_samples / hop_length + 1;
  if (num_samples < window_length) {
    throw std::invalid_argument("num_frames: signal shorter than window in uncentered mode");
  }
  return (num_samples - window_length) / hop_length + 1;
}

long StftConfig::canonical_length(long frames) const {
  if (frames < 1) throw std::invalid_argument("canonical_length: frames < 1");
  if (centered) return frames == 1 ? 1 : (frames - 1) * hop_length;
  return (frames - 1) * hop_length + window_length;
}

void StftConfig::validate() const {
  if (sample_rate <= 0) throw std::invalid_argument("StftConfig: sample_rate must be positive");
  if (hop_length <= 0) throw std::invalid_argument("StftConfig: hop_length must be positive");
  if (!(hop_length <= window_length && window_length <= fft_size)) {
    throw std::invalid_argument("StftConfig: need hop_length <= window_length <= fft_size");
  }
  if (!is_pow2(fft_size)) throw std::invalid_argument("StftConfig: fft_size must be a power of two");
  // Overlap-add cover: the squared window summed over hops must be positive
  // at every sample position, otherwise ISTFT normalization breaks down.
  const Eigen::VectorXd w = make_window(window, window_length);
  for (int p = 0; p < hop_length; ++p) {
    double s = 0.0;
    for (int q = p; q < window_length; q += hop_length) s += w[q] * w[q];
    if (s <= 1e-10) {
      throw std::invalid_argument("StftConfig: window/hop combination leaves gaps in overlap-add cover");
    }
  }
}

ComplexSpectrogram stft(const Waveform& wave, const StftConfig& cfg) {
  cfg.validate();
  if (wave.samples.empty()) throw std::invalid_argument("stft: empty input waveform");
  if (wave.sample_rate != cfg.sample_rate) {
    throw std::invalid_argument("stft: waveform sample rate " + std::to_string(wave.sample_rate) +
                                " Hz does not match config " + std::to_string(cfg.sample_rate) + " Hz");
  }

  const long len = static_cast<long>(wave.samples.size());
  const int wl = cfg.window_length;
  const int pad = cfg.centered ? wl / 2 : 0;
  const long frames = cfg.num_frames(len);
  const int n_bins = cfg.bins();
  const int fft_off = (cfg.fft_size - wl) / 2;  // window centered in the FFT buffer

  const Eigen::VectorXd window = make_window(cfg.window, wl);
  RealFft fft(cfg.fft_size);

  ComplexSpectrogram out;
  out.re.resize(n_bins, frames);
  out.im.resize(n_bins, frames);

  std::vector<double> buf(cfg.fft_size);
  std::vector<std::complex<double>> spec(n_bins);

  for (long f = 0; f < frames; ++f) {
    std::fill(buf.begin(), buf.end(), 0.0);
    const long start = f * cfg.hop_length - pad;
    for (int n = 0; n < wl; ++n) {
      long j = start + n;
      if (cfg.centered) {
        j = reflect_index(j, len);
      }
      buf[fft_off + n] = static_cast<double>(wave.samples[static_cast<std::size_t>(j)]) * window[n];
    }
    fft.forward(buf.data(), spec.data());
    for (int k = 0; k < n_bins; ++k) {
      out.re(k, f) = static_cast<float>(spec[k].real());
      out.im(k, f) = static_cast<float>(spec[k].imag());
    }
  }
  return out;
}

Waveform istft(const ComplexSpectrogram& spec, const StftConfig& cfg, long length) {
  cfg.validate();
  if (spec.re.rows() != spec.im.rows() || spec.re.cols() != spec.im.cols()) {
    throw std::invalid_argument("istft: real/imaginary parts have different shapes");
  }
  if (spec.bins() != cfg.bins()) {
    throw std::invalid_argument("istft: spectrogram has " + std::to_string(spec.bins()) +
                                " bins, config expects " + std::to_string(cfg.bins()));
  }
  const long frames = spec.frames();
  if (frames < 1) throw std::invalid_argument("istft: no frames");
  if (length < 1) throw std::invalid_argument("istft: length < 1");
  if (cfg.num_frames(length) != frames) {
    throw std::invalid_argument("istft: length " + std::to_string(length) +
                                " is inconsistent with " + std::to_string(frames) + " frames");
  }

  const int wl = cfg.window_length;
  const int pad = cfg.centered ? wl / 2 : 0;
  const int fft_off = (cfg.fft_size - wl) / 2;
  const long total = length + 2 * pad;

  const Eigen::VectorXd window = make_window(cfg.window, wl);
  RealFft fft(cfg.fft_size);

  std::vector<double> acc(total, 0.0), wsum(total, 0.0);
  std::vector<double> buf(cfg.fft_size);
  std::vector<std::complex<double>> frame(cfg.bins());

  for (long f = 0; f < frames; ++f) {
    for (int k = 0; k < cfg.bins(); ++k) {
      frame[static_cast<std::size_t>(k)] = {static_cast<double>(spec.re(k, f)),
                                            static_cast<double>(spec.im(k, f))};
    }
    fft.inverse(frame.data(), buf.data());
    const long start = f * cfg.hop_length;
    for (int n = 0; n < wl; ++n) {
      const long p = start + n;
      if (p < 0 || p >= total) continue;
      acc[static_cast<std::size_t>(p)] += buf[fft_off + n] * window[n];
      wsum[static_cast<std::size_t>(p)] += window[n] * window[n];
    }
  }

  Waveform out;
  out.sample_rate = cfg.sample_rate;
  out.samples.resize(static_cast<std::size_t>(length));
  for (long i = 0; i < length; ++i) {
    const double d = wsum[static_cast<std::size_t>(i + pad)];
    if (d <= 1e-10) {
      throw std::runtime_error("istft: zero window normalization at sample " + std::to_string(i) +
                               " (degenerate window)");
    }
    out.samples[static_cast<std::size_t>(i)] =
        static_cast<float>(acc[static_cast<std::size_t>(i + pad)] / d);
  }
  return out;
}

AmplitudeSpectrogram amplitude(const ComplexSpectrogram& spec) {
  AmplitudeSpectrogram a;
  a.v = (spec.re.array().square() + spec.im.array().square()).sqrt().matrix();
  return a;
}

Eigen::MatrixXf log_amplitude(const AmplitudeSpectrogram& amp, float floor) {
  if (!(floor > 0.0f)) throw std::invalid_argument("log_amplitude: floor must be positive");
  return amp.v.array().max(floor).log().matrix();
}

PhaseSpectrogram phase_of(const ComplexSpectrogram& spec) {
  PhaseSpectrogram p;
  p.v.resize(spec.re.rows(), spec.re.cols());
  const float* re = spec.re.data();
  const float* im = spec.im.data();
  float* out = p.v.data();
  const Eigen::Index n = spec.re.size();
  for (Eigen::Index i = 0; i < n; ++i) out[i] = phi(re[i], im[i]);
  return p;
}

Eigen::MatrixXf diff_freq(const Eigen::MatrixXf& m) {
  if (m.rows() < 2) throw std::invalid_argument("diff_freq: need at least 2 bins");
  return m.bottomRows(m.rows() - 1) - m.topRows(m.rows() - 1);
}

Eigen::MatrixXf diff_time(const Eigen::MatrixXf& m) {
  if (m.cols() < 2) throw std::invalid_argument("diff_time: need at least 2 frames");
  return m.rightCols(m.cols() - 1) - m.leftCols(m.cols() - 1);
}

}  // namespace nspp
