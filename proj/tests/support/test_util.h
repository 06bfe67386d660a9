// tests/support/test_util.h
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

#ifndef NSPP_TESTS_SUPPORT_TEST_UTIL_H_
#define NSPP_TESTS_SUPPORT_TEST_UTIL_H_

#include <filesystem>
#include <string>

#include "nspp/rng.h"
#include "nspp/wav.h"

namespace nspp::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("nspp_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& child = "") const {
    return child.empty() ? path_.string() : (path_ / child).string();
  }

 private:
  std::filesystem::path path_;
};

inline Waveform random_waveform(std::uint64_t seed, long samples, int sample_rate = 16000,
                                double amplitude = 0.5) {
  Rng rng(seed);
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(static_cast<std::size_t>(samples));
  for (auto& s : w.samples) s = static_cast<float>(rng.uniform(-amplitude, amplitude));
  return w;
}

}  // namespace nspp::testing

#endif  // NSPP_TESTS_SUPPORT_TEST_UTIL_H_
