// nspp/phsc.h
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

#ifndef NSPP_PHSC_H_
#define NSPP_PHSC_H_

#include <Eigen/Core>
#include <string>

// PHSC spectrogram dump: one matrix per file.
//
//   bytes 0..3   magic "PHSC"
//   u32          version (currently 1)
//   u32          F  (frame count)
//   u32          N  (bin count)
//   F*N f32      row-major frames, little endian (frame 0 bins, frame 1 bins, ...)

namespace nspp {

inline constexpr std::uint32_t kPhscVersion = 1;

// `m` uses the library convention bins x frames; the file stores F then N.
void write_phsc(const std::string& path, const Eigen::MatrixXf& m);

// Returns a bins x frames matrix.  Throws on bad magic or version.
Eigen::MatrixXf read_phsc(const std::string& path);

}  // namespace nspp

#endif  // NSPP_PHSC_H_
