// src/synth.cc
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

#include "nspp/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <vector>

#include "nspp/rng.h"

namespace nspp {

namespace {

constexpr double kTwoPiD = 2.0 * std::numbers::pi;
constexpr double kMaxHarmonicHz = 7600.0;

struct Formants {
  double center[4];
  double width[4];
  double gain[4];
};

Formants random_formants(Rng& rng) {
  Formants f;
  const double lo[4] = {280.0, 900.0, 2200.0, 3200.0};
  const double hi[4] = {850.0, 2100.0, 3100.0, 4400.0};
  for (int i = 0; i < 4; ++i) {
    f.center[i] = rng.uniform(lo[i], hi[i]);
    f.width[i] = rng.uniform(80.0, 220.0) * (1.0 + 0.4 * i);
    f.gain[i] = rng.uniform(0.6, 1.0) / (1.0 + 0.8 * i);
  }
  return f;
}

double formant_envelope(const Formants& f, double hz) {
  double v = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = (hz - f.center[i]) / f.width[i];
    v += f.gain[i] / (1.0 + d * d);
  }
  // Gentle spectral tilt.
  return v / (1.0 + std::pow(hz / 3200.0, 2.0));
}

void append_silence(std::vector<float>& out, int n) {
  out.insert(out.end(), static_cast<std::size_t>(n), 0.0f);
}

void apply_ramps(std::vector<double>& seg, int sr, double attack_s, double release_s) {
  const int a = std::min<int>(static_cast<int>(attack_s * sr), static_cast<int>(seg.size()) / 2);
  const int r = std::min<int>(static_cast<int>(release_s * sr), static_cast<int>(seg.size()) / 2);
  for (int i = 0; i < a; ++i) {
    const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * i / a);
    seg[static_cast<std::size_t>(i)] *= g;
  }
  for (int i = 0; i < r; ++i) {
    const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * i / r);
    seg[seg.size() - 1 - static_cast<std::size_t>(i)] *= g;
  }
}

std::vector<double> voiced_segment(Rng& rng, int sr, double base_f0, const Formants& formants) {
  const double dur = rng.uniform(0.16, 0.45);
  const int n = static_cast<int>(dur * sr);
  const double f0_a = base_f0 * rng.uniform(0.85, 1.2);
  const double f0_b = base_f0 * rng.uniform(0.85, 1.2);
  const double vib_rate = rng.uniform(4.0, 6.5);
  const double vib_depth = rng.uniform(0.005, 0.02);
  const double f0_peak = std::max(f0_a, f0_b) * (1.0 + vib_depth);
  const int harmonics = std::max(3, static_cast<int>(kMaxHarmonicHz / f0_peak));

  std::vector<double> amp(static_cast<std::size_t>(harmonics));
  std::vector<double> phase(static_cast<std::size_t>(harmonics));
  const double f0_mid = 0.5 * (f0_a + f0_b);
  for (int h = 0; h < harmonics; ++h) {
    amp[static_cast<std::size_t>(h)] =
        formant_envelope(formants, (h + 1) * f0_mid) / std::sqrt(h + 1.0);
    phase[static_cast<std::size_t>(h)] = rng.uniform(0.0, kTwoPiD);
  }

  const double trem_rate = rng.uniform(1.5, 3.5);
  const double trem_depth = rng.uniform(0.05, 0.2);
  const double trem_phase = rng.uniform(0.0, kTwoPiD);
  const double breath = rng.uniform(0.004, 0.015);

  std::vector<double> seg(static_cast<std::size_t>(n));
  double hp_prev_x = 0.0, hp_prev_y = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / n;
    const double glide = 0.5 - 0.5 * std::cos(std::numbers::pi * u);
    const double f0 = (f0_a + (f0_b - f0_a) * glide) *
                      (1.0 + vib_depth * std::sin(kTwoPiD * vib_rate * i / sr));
    double s = 0.0;
    for (int h = 0; h < harmonics; ++h) {
      phase[static_cast<std::size_t>(h)] += kTwoPiD * (h + 1) * f0 / sr;
      s += amp[static_cast<std::size_t>(h)] * std::sin(phase[static_cast<std::size_t>(h)]);
    }
    // Breath noise: highpassed white noise following the voicing envelope.
    const double w = rng.uniform(-1.0, 1.0);
    const double hp = w - hp_prev_x + 0.97 * hp_prev_y;
    hp_prev_x = w;
    hp_prev_y = hp;
    s += breath * hp;
    s *= 1.0 + trem_depth * std::sin(kTwoPiD * trem_rate * i / sr + trem_phase);
    seg[static_cast<std::size_t>(i)] = s;
  }

  double rms = 0.0;
  for (double v : seg) rms += v * v;
  rms = std::sqrt(rms / n);
  const double target = rng.uniform(0.12, 0.22);
  if (rms > 0.0) {
    for (double& v : seg) v *= target / rms;
  }
  apply_ramps(seg, sr, 0.018, 0.03);
  return seg;
}

std::vector<double> fricative_segment(Rng& rng, int sr) {
  const double dur = rng.uniform(0.07, 0.18);
  const int n = static_cast<int>(dur * sr);
  const double fc = rng.uniform(2500.0, 7000.0);
  const double q = rng.uniform(1.5, 4.0);
  const double w0 = kTwoPiD * fc / sr;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  const double b0 = alpha / a0, b2 = -alpha / a0;
  const double a1 = -2.0 * std::cos(w0) / a0, a2 = (1.0 - alpha) / a0;

  std::vector<double> seg(static_cast<std::size_t>(n));
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    const double y = b0 * x + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    seg[static_cast<std::size_t>(i)] = y;
  }
  double rms = 0.0;
  for (double v : seg) rms += v * v;
  rms = std::sqrt(rms / n);
  const double target = rng.uniform(0.03, 0.08);
  if (rms > 0.0) {
    for (double& v : seg) v *= target / rms;
  }
  apply_ramps(seg, sr, 0.012, 0.02);
  return seg;
}

std::vector<double> plosive_segment(Rng& rng, int sr) {
  const int closure = static_cast<int>(rng.uniform(0.035, 0.07) * sr);
  const int burst = static_cast<int>(rng.uniform(0.008, 0.018) * sr);
  const double tau = rng.uniform(0.004, 0.008) * sr;
  const double gain = rng.uniform(0.1, 0.25);
  std::vector<double> seg(static_cast<std::size_t>(closure + burst), 0.0);
  for (int i = 0; i < burst; ++i) {
    seg[static_cast<std::size_t>(closure + i)] =
        gain * rng.uniform(-1.0, 1.0) * std::exp(-i / tau);
  }
  return seg;
}

}  // namespace

Waveform synth_utterance(std::uint64_t seed, const SynthConfig& cfg) {
  Rng rng(seed);
  const int sr = cfg.sample_rate;
  const double target_s = rng.uniform(cfg.min_seconds, cfg.max_seconds);
  const double base_f0 = rng.uniform(105.0, 230.0);
  const Formants formants = random_formants(rng);

  Waveform w;
  w.sample_rate = sr;
  append_silence(w.samples, static_cast<int>(rng.uniform(0.03, 0.07) * sr));

  bool last_was_silence = true;
  while (w.samples.size() < static_cast<std::size_t>(target_s * sr)) {
    const double roll = rng.uniform();
    std::vector<double> seg;
    if (roll < 0.58) {
      seg = voiced_segment(rng, sr, base_f0, formants);
      last_was_silence = false;
    } else if (roll < 0.72) {
      seg = fricative_segment(rng, sr);
      last_was_silence = false;
    } else if (roll < 0.84) {
      seg = plosive_segment(rng, sr);
      last_was_silence = false;
    } else if (!last_was_silence) {
      append_silence(w.samples, static_cast<int>(rng.uniform(0.05, 0.15) * sr));
      last_was_silence = true;
      continue;
    } else {
      continue;
    }
    for (double v : seg) w.samples.push_back(static_cast<float>(v));
  }
  append_silence(w.samples, static_cast<int>(rng.uniform(0.03, 0.06) * sr));

  float peak = 0.0f;
  for (float v : w.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0f) {
    const float gain = static_cast<float>(rng.uniform(0.5, 0.7)) / peak;
    for (float& v : w.samples) v *= gain;
  }
  return w;
}

void write_synth_corpus(const std::string& dir, int count, std::uint64_t seed,
                        const SynthConfig& cfg) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "utt_%03d.wav", i);
    const Waveform w = synth_utterance(seed + static_cast<std::uint64_t>(i) * 1000003ULL, cfg);
    write_wav((std::filesystem::path(dir) / name).string(), w);
  }
}

}  // namespace nspp
