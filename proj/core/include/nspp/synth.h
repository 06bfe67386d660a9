// nspp/synth.h
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

#ifndef NSPP_SYNTH_H_
#define NSPP_SYNTH_H_

#include <cstdint>
#include <string>

#include "nspp/wav.h"

// Deterministic speech-like test signals: sequences of voiced segments
// (harmonic source with gliding F0, formant envelope and a little breath
// noise), fricative noise bursts, plosives and silences.  Used as the demo
// and test corpus; they exercise the same code paths as recorded speech
// (harmonic structure, trackable F0, transients, noise phases).

namespace nspp {

struct SynthConfig {
  int sample_rate = 16000;
  double min_seconds = 1.6;
  double max_seconds = 2.6;
};

Waveform synth_utterance(std::uint64_t seed, const SynthConfig& cfg = {});

// Writes `count` WAV files named utt_000.wav ... into `dir` (created if
// missing), seeded from `seed`.
void write_synth_corpus(const std::string& dir, int count, std::uint64_t seed,
                        const SynthConfig& cfg = {});

}  // namespace nspp

#endif  // NSPP_SYNTH_H_
