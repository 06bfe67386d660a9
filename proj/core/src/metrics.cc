// src/metrics.cc
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

#include "nspp/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace nspp {

namespace {

constexpr double kSnrCapDb = 60.0;
constexpr double kSnrFrameSeconds = 0.025;
constexpr double kSnrEnergyGate = 1e-6;  // mean square, == -60 dBFS

constexpr double kF0FrameSeconds = 0.025;
constexpr double kF0HopSeconds = 0.005;
constexpr double kF0Min = 60.0;
constexpr double kF0Max = 400.0;
constexpr double kVoicingThreshold = 0.3;
constexpr double kPeakTolerance = 0.85;  // accept the earliest peak this close to the best

}  // namespace

double snr_db(const Waveform& reference, const Waveform& test) {
  if (reference.sample_rate != test.sample_rate) {
    throw std::invalid_argument("snr_db: sample rate mismatch");
  }
  const std::size_t n = std::min(reference.samples.size(), test.samples.size());
  const int frame = std::max(1, static_cast<int>(std::lround(reference.sample_rate * kSnrFrameSeconds)));
  if (n == 0) throw std::invalid_argument("snr_db: empty signals");

  double acc = 0.0;
  long kept = 0;
  for (std::size_t start = 0; start + static_cast<std::size_t>(frame) <= n;
       start += static_cast<std::size_t>(frame)) {
    double es = 0.0, en = 0.0;
    for (int i = 0; i < frame; ++i) {
      const double x = reference.samples[start + static_cast<std::size_t>(i)];
      const double y = test.samples[start + static_cast<std::size_t>(i)];
      es += x * x;
      en += (x - y) * (x - y);
    }
    if (es / frame <= kSnrEnergyGate) continue;
    const double snr = en > 0.0 ? 10.0 * std::log10(es / en) : kSnrCapDb;
    acc += std::min(snr, kSnrCapDb);
    kept += 1;
  }
  if (kept == 0) {
    throw std::runtime_error("snr_db: reference has no frames above the -60 dBFS energy gate");
  }
  return acc / kept;
}

std::vector<double> track_f0(const Waveform& wave) {
  const int sr = wave.sample_rate;
  const int frame = static_cast<int>(std::lround(sr * kF0FrameSeconds));
  const int hop = static_cast<int>(std::lround(sr * kF0HopSeconds));
  const int lag_min = static_cast<int>(std::floor(sr / kF0Max));
  const int lag_max = static_cast<int>(std::ceil(sr / kF0Min));
  if (lag_max + 2 >= frame) throw std::invalid_argument("track_f0: frame too short for lag range");

  std::vector<double> out;
  const long n = static_cast<long>(wave.samples.size());
  std::vector<double> x(static_cast<std::size_t>(frame));
  std::vector<double> r(static_cast<std::size_t>(lag_max) + 2, 0.0);

  for (long start = 0; start + frame <= n; start += hop) {
    double mean = 0.0;
    for (int i = 0; i < frame; ++i) mean += wave.samples[static_cast<std::size_t>(start + i)];
    mean /= frame;
    double energy = 0.0;
    for (int i = 0; i < frame; ++i) {
      x[static_cast<std::size_t>(i)] = wave.samples[static_cast<std::size_t>(start + i)] - mean;
      energy += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
    if (energy / frame < 1e-8) {
      out.push_back(0.0);
      continue;
    }

    // Normalized cross-correlation over the overlapping region.
    const int lo = std::max(1, lag_min - 1);
    const int hi = std::min(frame - 1, lag_max + 1);
    double rmax = 0.0;
    for (int tau = lo; tau <= hi; ++tau) {
      double num = 0.0, e0 = 0.0, e1 = 0.0;
      const int len = frame - tau;
      for (int i = 0; i < len; ++i) {
        num += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + tau)];
        e0 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        e1 += x[static_cast<std::size_t>(i + tau)] * x[static_cast<std::size_t>(i + tau)];
      }
      const double denom = std::sqrt(e0 * e1);
      r[static_cast<std::size_t>(tau)] = denom > 0.0 ? num / denom : 0.0;
      if (tau >= lag_min && tau <= lag_max) rmax = std::max(rmax, r[static_cast<std::size_t>(tau)]);
    }
    if (rmax < kVoicingThreshold) {
      out.push_back(0.0);
      continue;
    }

    // Earliest local maximum close enough to the global one; biases against
    // octave-down errors at multiples of the period.
    int best = -1;
    const double accept = std::max(kVoicingThreshold, kPeakTolerance * rmax);
    for (int tau = lag_min; tau <= lag_max; ++tau) {
      const double rt = r[static_cast<std::size_t>(tau)];
      if (rt >= accept && rt >= r[static_cast<std::size_t>(tau) - 1] &&
          rt >= r[static_cast<std::size_t>(tau) + 1]) {
        best = tau;
        break;
      }
    }
    if (best < 0) {
      out.push_back(0.0);
      continue;
    }
    // Parabolic refinement around the peak.
    const double rm = r[static_cast<std::size_t>(best) - 1];
    const double r0 = r[static_cast<std::size_t>(best)];
    const double rp = r[static_cast<std::size_t>(best) + 1];
    const double denom = rm - 2.0 * r0 + rp;
    double delta = 0.0;
    if (std::abs(denom) > 1e-12) delta = std::clamp(0.5 * (rm - rp) / denom, -0.5, 0.5);
    const double f0 = sr / (best + delta);
    out.push_back(f0 >= kF0Min * 0.9 && f0 <= kF0Max * 1.1 ? f0 : 0.0);
  }
  return out;
}

double f0_rmse_cents(const Waveform& reference, const Waveform& test) {
  if (reference.sample_rate != test.sample_rate) {
    throw std::invalid_argument("f0_rmse_cents: sample rate mismatch");
  }
  const std::vector<double> fr = track_f0(reference);
  const std::vector<double> ft = track_f0(test);
  const std::size_t n = std::min(fr.size(), ft.size());
  double acc = 0.0;
  long voiced = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fr[i] > 0.0 && ft[i] > 0.0) {
      const double cents = 1200.0 * std::log2(ft[i] / fr[i]);
      acc += cents * cents;
      voiced += 1;
    }
  }
  if (voiced == 0) {
    throw std::runtime_error("f0_rmse_cents: no mutually voiced frames; result undefined");
  }
  return std::sqrt(acc / voiced);
}

double rtf(double generation_seconds, double audio_seconds) {
  if (!(audio_seconds > 0.0)) throw std::invalid_argument("rtf: audio duration must be positive");
  if (generation_seconds < 0.0) throw std::invalid_argument("rtf: negative generation time");
  return generation_seconds / audio_seconds;
}

void EvalReport::finalize() {
  mean_snr_db = 0.0;
  total_duration_s = 0.0;
  double f0_acc = 0.0;
  long f0_count = 0;
  for (const auto& u : utterances) {
    mean_snr_db += u.snr_db;
    total_duration_s += u.duration_s;
    if (u.f0_rmse_cents) {
      f0_acc += *u.f0_rmse_cents;
      f0_count += 1;
    }
  }
  if (!utterances.empty()) mean_snr_db /= static_cast<double>(utterances.size());
  mean_f0_rmse_cents = f0_count > 0 ? std::optional<double>(f0_acc / f0_count) : std::nullopt;
  rtf_value = total_gen_time_s > 0.0 && total_duration_s > 0.0
                  ? std::optional<double>(rtf(total_gen_time_s, total_duration_s))
                  : std::nullopt;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& u : utterances) {
    nlohmann::json ju{{"name", u.name}, {"snr_db", u.snr_db}, {"duration_s", u.duration_s}};
    if (u.f0_rmse_cents) {
      ju["f0_rmse_cents"] = *u.f0_rmse_cents;
    } else {
      ju["f0_rmse_cents"] = nullptr;
    }
    per.push_back(ju);
  }
  nlohmann::json j{{"utterances", per},
                   {"mean_snr_db", mean_snr_db},
                   {"total_duration_s", total_duration_s},
                   {"total_gen_time_s", total_gen_time_s}};
  j["mean_f0_rmse_cents"] =
      mean_f0_rmse_cents ? nlohmann::json(*mean_f0_rmse_cents) : nlohmann::json(nullptr);
  j["rtf"] = rtf_value ? nlohmann::json(*rtf_value) : nlohmann::json(nullptr);
  return j;
}

std::string EvalReport::to_table() const {
  std::string s;
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %10s %16s %10s\n", "utterance", "SNR(dB)",
                "F0-RMSE(cent)", "dur(s)");
  s += line;
  for (const auto& u : utterances) {
    std::snprintf(line, sizeof(line), "%-28s %10.2f %16s %10.2f\n", u.name.c_str(), u.snr_db,
                  u.f0_rmse_cents ? std::to_string(*u.f0_rmse_cents).substr(0, 8).c_str() : "n/a",
                  u.duration_s);
    s += line;
  }
  std::snprintf(line, sizeof(line), "%-28s %10.2f %16s %10.2f\n", "mean/total", mean_snr_db,
                mean_f0_rmse_cents ? std::to_string(*mean_f0_rmse_cents).substr(0, 8).c_str() : "n/a",
                total_duration_s);
  s += line;
  if (rtf_value) {
    std::snprintf(line, sizeof(line), "RTF %.4f (%.1fx real time), generation %.3f s\n", *rtf_value,
                  *rtf_value > 0 ? 1.0 / *rtf_value : 0.0, total_gen_time_s);
    s += line;
  }
  return s;
}

}  // namespace nspp
