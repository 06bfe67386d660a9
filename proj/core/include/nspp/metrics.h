// nspp/metrics.h
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

#ifndef NSPP_METRICS_H_
#define NSPP_METRICS_H_

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nspp/wav.h"

// Objective evaluation: segmental SNR, F0 RMSE in cents, real-time factor.

namespace nspp {

// Segmental SNR in dB: signals are trimmed to the shorter length, split into
// non-overlapping 25 ms frames, frames with reference energy at or below
// -60 dBFS are skipped, each frame's 10*log10(sum x^2 / sum (x - y)^2) is
// capped at 60 dB, and the kept frames are averaged.  Throws if the signals
// have different sample rates or no frame passes the energy gate.
double snr_db(const Waveform& reference, const Waveform& test);

// F0 track with 25 ms frames and 5 ms hop.  Normalized-autocorrelation
// tracker over 60..400 Hz with voicing threshold 0.3 and parabolic peak
// interpolation; 0 marks unvoiced frames.
std::vector<double> track_f0(const Waveform& wave);

// RMSE of 1200*log2(f_test / f_ref) over frames voiced in both tracks.
// Throws if there is no mutually voiced frame (undefined, not 0).
double f0_rmse_cents(const Waveform& reference, const Waveform& test);

// generation_seconds / audio_seconds.  Throws on non-positive duration.
double rtf(double generation_seconds, double audio_seconds);

struct UtteranceEval {
  std::string name;
  double snr_db = 0.0;
  std::optional<double> f0_rmse_cents;  // empty when undefined (no voiced overlap)
  double duration_s = 0.0;
};

struct EvalReport {
  std::vector<UtteranceEval> utterances;
  double mean_snr_db = 0.0;
  std::optional<double> mean_f0_rmse_cents;
  double total_duration_s = 0.0;
  double total_gen_time_s = 0.0;       // 0 when no timing was supplied
  std::optional<double> rtf_value;     // gen time / duration when available

  // Recomputes the aggregate fields from the per-utterance list.
  void finalize();

  nlohmann::json to_json() const;
  // Aligned text table, one row per utterance plus an aggregate row.
  std::string to_table() const;
};

}  // namespace nspp

#endif  // NSPP_METRICS_H_
