// src/griffin_lim.cc
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

#include "nspp/griffin_lim.h"

#include <cmath>
#include <stdexcept>

#include "nspp/phase_math.h"
#include "nspp/rng.h"

namespace nspp {

namespace {

constexpr float kMagnitudeGuard = 1e-8f;

void check_amp(const AmplitudeSpectrogram& amp, const StftConfig& cfg) {
  if (amp.bins() != cfg.bins()) {
    throw std::invalid_argument("griffin_lim: amplitude has " + std::to_string(amp.bins()) +
                                " bins, config expects " + std::to_string(cfg.bins()));
  }
  if (amp.frames() < 1) throw std::invalid_argument("griffin_lim: no frames");
  if ((amp.v.array() < 0.0f).any()) {
    throw std::invalid_argument("griffin_lim: negative amplitude entries");
  }
}

ComplexSpectrogram polar_to_complex(const AmplitudeSpectrogram& amp, const Eigen::MatrixXf& phase) {
  ComplexSpectrogram c;
  c.re = amp.v.array() * phase.array().cos();
  c.im = amp.v.array() * phase.array().sin();
  return c;
}

}  // namespace

PhaseSpectrogram griffin_lim(const AmplitudeSpectrogram& amp, const GlConfig& cfg,
                             const StftConfig& stft_cfg) {
  stft_cfg.validate();
  check_amp(amp, stft_cfg);
  if (cfg.iterations < 0) throw std::invalid_argument("griffin_lim: negative iteration count");

  const int n_bins = amp.bins();
  const long frames = amp.frames();

  Eigen::MatrixXf phase(n_bins, frames);
  switch (cfg.init) {
    case GlInit::kZero:
      phase.setZero();
      break;
    case GlInit::kRandom: {
      Rng rng(cfg.seed);
      for (Eigen::Index i = 0; i < phase.size(); ++i) {
        phase.data()[i] = wrap_to_principal(static_cast<float>(rng.uniform(-kPi<double>, kPi<double>)));
      }
      break;
    }
    case GlInit::kProvided: {
      if (!cfg.initial_phase) throw std::invalid_argument("griffin_lim: provided init without phase");
      if (cfg.initial_phase->rows() != n_bins || cfg.initial_phase->cols() != frames) {
        throw std::invalid_argument("griffin_lim: provided phase shape mismatch");
      }
      phase = cfg.initial_phase->unaryExpr([](float v) { return wrap_to_principal(v); });
      break;
    }
  }

  const long length = stft_cfg.canonical_length(frames);
  for (int it = 0; it < cfg.iterations; ++it) {
    const Waveform w = istft(polar_to_complex(amp, phase), stft_cfg, length);
    const ComplexSpectrogram s = stft(w, stft_cfg);
    for (Eigen::Index i = 0; i < phase.size(); ++i) {
      const float re = s.re.data()[i];
      const float im = s.im.data()[i];
      if (std::hypot(re, im) >= kMagnitudeGuard) {
        phase.data()[i] = phi(re, im);
      }
    }
  }

  PhaseSpectrogram out;
  out.v = std::move(phase);
  return out;
}

Waveform reconstruct(const AmplitudeSpectrogram& amp, const PhaseSpectrogram& phase,
                     const StftConfig& stft_cfg, long length) {
  if (amp.v.rows() != phase.v.rows() || amp.v.cols() != phase.v.cols()) {
    throw std::invalid_argument("reconstruct: amplitude/phase shape mismatch");
  }
  return istft(polar_to_complex(amp, phase.v), stft_cfg, length);
}

double gl_consistency_residual(const AmplitudeSpectrogram& amp, const PhaseSpectrogram& phase,
                               const StftConfig& stft_cfg) {
  if (amp.v.rows() != phase.v.rows() || amp.v.cols() != phase.v.cols()) {
    throw std::invalid_argument("gl_consistency_residual: shape mismatch");
  }
  const long length = stft_cfg.canonical_length(amp.frames());
  const Waveform w = istft(polar_to_complex(amp, phase.v), stft_cfg, length);
  const AmplitudeSpectrogram projected = amplitude(stft(w, stft_cfg));
  return (amp.v - projected.v).cast<double>().squaredNorm();
}

}  // namespace nspp
