// src/phsc.cc
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

#include "nspp/phsc.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nspp {

void write_phsc(const std::string& path, const Eigen::MatrixXf& m) {
  if (m.size() == 0) throw std::invalid_argument(path + ": refusing to write empty matrix");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  const std::uint32_t version = kPhscVersion;
  const std::uint32_t frames = static_cast<std::uint32_t>(m.cols());
  const std::uint32_t bins = static_cast<std::uint32_t>(m.rows());
  out.write("PHSC", 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&frames), 4);
  out.write(reinterpret_cast<const char*>(&bins), 4);
  // Column-major bins x frames memory is exactly frame-major on disk.
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(float) * m.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

Eigen::MatrixXf read_phsc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "PHSC", 4) != 0) {
    throw std::runtime_error(path + ": not a PHSC file (bad magic)");
  }
  std::uint32_t version = 0, frames = 0, bins = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&frames), 4);
  in.read(reinterpret_cast<char*>(&bins), 4);
  if (!in) throw std::runtime_error(path + ": truncated header");
  if (version != kPhscVersion) {
    throw std::runtime_error(path + ": unsupported PHSC version " + std::to_string(version));
  }
  if (frames == 0 || bins == 0) throw std::runtime_error(path + ": empty matrix");
  Eigen::MatrixXf m(bins, frames);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(float) * m.size()));
  if (!in) throw std::runtime_error(path + ": truncated payload");
  return m;
}

}  // namespace nspp
