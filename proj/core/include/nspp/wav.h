// nspp/wav.h
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

#ifndef NSPP_WAV_H_
#define NSPP_WAV_H_

#include <string>
#include <vector>

namespace nspp {

// Mono audio signal, samples nominally in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 16000;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// Reads a 16-bit PCM mono RIFF/WAVE file.  Anything else (stereo, float,
// compressed) is rejected with a descriptive error.  No resampling is done;
// the sample rate is whatever the file declares.
Waveform read_wav(const std::string& path);

// Writes 16-bit PCM mono.  Samples are clamped to [-1, 1] before quantizing.
void write_wav(const std::string& path, const Waveform& wave);

}  // namespace nspp

#endif  // NSPP_WAV_H_
