// nspp/griffin_lim.h
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

#ifndef NSPP_GRIFFIN_LIM_H_
#define NSPP_GRIFFIN_LIM_H_

#include <cstdint>
#include <optional>

#include "nspp/stft.h"

namespace nspp {

enum class GlInit { kZero, kRandom, kProvided };

struct GlConfig {
  int iterations = 100;
  GlInit init = GlInit::kZero;
  std::uint64_t seed = 0;                          // used by kRandom
  std::optional<Eigen::MatrixXf> initial_phase;    // used by kProvided
};

// Plain iterative phase estimation: alternate the STFT-consistency projection
// with magnitude replacement, keeping the previous phase wherever the
// projected magnitude falls below 1e-8 (the division guard).  Deterministic
// given (amp, cfg, stft_cfg).  Returns wrapped phases in (-pi, pi].
PhaseSpectrogram griffin_lim(const AmplitudeSpectrogram& amp, const GlConfig& cfg,
                             const StftConfig& stft_cfg);

// ISTFT of amp * e^{j phase}, trimmed/padded to `length` samples.
Waveform reconstruct(const AmplitudeSpectrogram& amp, const PhaseSpectrogram& phase,
                     const StftConfig& stft_cfg, long length);

// Squared Frobenius norm of amp - |STFT(ISTFT(amp * e^{j phase}))|; the
// quantity the iteration drives down.
double gl_consistency_residual(const AmplitudeSpectrogram& amp, const PhaseSpectrogram& phase,
                               const StftConfig& stft_cfg);

}  // namespace nspp

#endif  // NSPP_GRIFFIN_LIM_H_
