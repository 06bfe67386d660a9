// tests/test_stft.cc
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

#include "nspp/stft.h"

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nspp/phase_math.h"
#include "nspp/synth.h"
#include "support/test_util.h"

using namespace nspp;
using nspp::testing::random_waveform;

namespace {

double max_abs_diff(const Waveform& a, const Waveform& b) {
  REQUIRE(a.samples.size() == b.samples.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(a.samples[i]) - b.samples[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("default config invariants") {
  StftConfig cfg;
  cfg.validate();
  CHECK(cfg.bins() == 513);
  CHECK(cfg.num_frames(8000) == 101);
  CHECK(cfg.canonical_length(101) == 8000);
}

TEST_CASE("invalid configs are rejected") {
  StftConfig cfg;
  cfg.fft_size = 1000;  // not a power of two
  CHECK_THROWS(cfg.validate());
  cfg = StftConfig{};
  cfg.hop_length = 400;  // hop > window
  CHECK_THROWS(cfg.validate());
  cfg = StftConfig{};
  cfg.window_length = 2048;  // window > fft
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("frame count and shape") {
  StftConfig cfg;
  const auto spec = stft(random_waveform(1, 8000), cfg);
  CHECK(spec.bins() == 513);
  CHECK(spec.frames() == 101);
  const auto spec2 = stft(random_waveform(2, 8001), cfg);
  CHECK(spec2.frames() == 101);
  const auto spec3 = stft(random_waveform(3, 80), cfg);
  CHECK(spec3.frames() == 2);
}

TEST_CASE("zero waveform gives zero spectrogram") {
  StftConfig cfg;
  Waveform w;
  w.samples.assign(4000, 0.0f);
  const auto spec = stft(w, cfg);
  CHECK(spec.re.cwiseAbs().maxCoeff() == 0.0f);
  CHECK(spec.im.cwiseAbs().maxCoeff() == 0.0f);
  const auto back = istft(spec, cfg, 4000);
  for (float s : back.samples) CHECK(s == 0.0f);
}

TEST_CASE("1 kHz cosine peaks at bin 64 in every frame") {
  StftConfig cfg;
  Waveform w;
  w.samples.resize(8000);
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    w.samples[n] = static_cast<float>(std::cos(2.0 * std::numbers::pi * 1000.0 * n / 16000.0));
  }
  const auto amp = amplitude(stft(w, cfg));
  for (long f = 0; f < amp.frames(); ++f) {
    Eigen::Index peak = 0;
    amp.v.col(f).maxCoeff(&peak);
    CHECK(peak == 64);
  }
}

TEST_CASE("istft(stft(x)) round trip within 1e-6") {
  StftConfig cfg;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const long len = 80 * (20 + static_cast<long>(seed) * 13);
    const Waveform x = random_waveform(seed, len, 16000, 0.99);
    const Waveform y = istft(stft(x, cfg), cfg, len);
    CHECK(max_abs_diff(x, y) < 1e-6);
  }
  // Lengths that are not hop multiples reconstruct too.
  const Waveform x = random_waveform(99, 4321, 16000, 0.99);
  const Waveform y = istft(stft(x, cfg), cfg, 4321);
  CHECK(max_abs_diff(x, y) < 1e-6);
}

TEST_CASE("round trip on a synthetic utterance") {
  StftConfig cfg;
  const Waveform x = synth_utterance(42);
  const Waveform y = istft(stft(x, cfg), cfg, static_cast<long>(x.samples.size()));
  CHECK(max_abs_diff(x, y) < 1e-6);
}

TEST_CASE("uncentered analysis round trips as well") {
  StftConfig cfg;
  cfg.centered = false;
  const long len = 8000;
  CHECK(cfg.num_frames(len) == (len - 320) / 80 + 1);
  const Waveform x = random_waveform(5, len, 16000, 0.99);
  const Waveform y = istft(stft(x, cfg), cfg, len);
  CHECK(max_abs_diff(x, y) < 1e-6);
}

TEST_CASE("energy scales quadratically") {
  StftConfig cfg;
  Waveform x = random_waveform(17, 4000, 16000, 0.4);
  const auto s1 = stft(x, cfg);
  for (auto& v : x.samples) v *= 2.0f;
  const auto s2 = stft(x, cfg);
  const double e1 = s1.re.cast<double>().squaredNorm() + s1.im.cast<double>().squaredNorm();
  const double e2 = s2.re.cast<double>().squaredNorm() + s2.im.cast<double>().squaredNorm();
  CHECK(std::abs(e2 / e1 - 4.0) < 1e-9 * 4.0);
}

TEST_CASE("stft error cases") {
  StftConfig cfg;
  Waveform w = random_waveform(1, 1000);
  w.sample_rate = 8000;
  CHECK_THROWS_WITH_AS(stft(w, cfg), doctest::Contains("sample rate"), std::invalid_argument);
  Waveform empty;
  CHECK_THROWS(stft(empty, cfg));
}

TEST_CASE("istft error cases") {
  StftConfig cfg;
  const auto spec = stft(random_waveform(1, 800), cfg);
  CHECK_THROWS(istft(spec, cfg, 100000));  // inconsistent length
  ComplexSpectrogram bad = spec;
  bad.im = bad.im.topRows(100).eval();
  CHECK_THROWS(istft(bad, cfg, 800));  // re/im shape mismatch
  StftConfig other = cfg;
  other.fft_size = 2048;
  CHECK_THROWS(istft(spec, other, 800));  // bins mismatch
}

TEST_CASE("amplitude examples") {
  ComplexSpectrogram s;
  s.re.resize(1, 3);
  s.im.resize(1, 3);
  s.re << 3.0f, 0.0f, -1.0f;
  s.im << 4.0f, 0.0f, 0.0f;
  const auto a = amplitude(s);
  CHECK(a.v(0, 0) == doctest::Approx(5.0f));
  CHECK(a.v(0, 1) == 0.0f);
  CHECK(a.v(0, 2) == doctest::Approx(1.0f));
}

TEST_CASE("log_amplitude examples and floor") {
  AmplitudeSpectrogram a;
  a.v.resize(1, 3);
  a.v << 1.0f, 0.0f, static_cast<float>(std::numbers::e);
  const auto la = log_amplitude(a);
  CHECK(la(0, 0) == doctest::Approx(0.0f));
  CHECK(la(0, 1) == doctest::Approx(std::log(1e-5f)));
  CHECK(la(0, 2) == doctest::Approx(1.0f));
  CHECK_THROWS(log_amplitude(a, 0.0f));
  CHECK_THROWS(log_amplitude(a, -1.0f));
}

TEST_CASE("phase_of axis cases and range") {
  ComplexSpectrogram s;
  s.re.resize(1, 3);
  s.im.resize(1, 3);
  s.re << 1.0f, 0.0f, -1.0f;
  s.im << 0.0f, 1.0f, 0.0f;
  const auto p = phase_of(s);
  CHECK(p.v(0, 0) == 0.0f);
  CHECK(p.v(0, 1) == doctest::Approx(kPi<float> / 2));
  CHECK(p.v(0, 2) == doctest::Approx(kPi<float>));

  const auto spec = stft(synth_utterance(7), StftConfig{});
  const auto ph = phase_of(spec);
  CHECK((ph.v.array() > -kPi<float>).all());
  CHECK((ph.v.array() <= kPi<float>).all());
}

TEST_CASE("differentials") {
  Eigen::MatrixXf m(3, 2);  // 3 bins x 2 frames
  m << 0.0f, 1.0f,
       1.0f, 3.0f,
       3.0f, 6.0f;
  const auto df = diff_freq(m);
  CHECK(df.rows() == 2);
  CHECK(df.cols() == 2);
  CHECK(df(0, 0) == 1.0f);
  CHECK(df(1, 0) == 2.0f);
  const auto dt = diff_time(m);
  CHECK(dt.rows() == 3);
  CHECK(dt.cols() == 1);
  CHECK(dt(0, 0) == 1.0f);
  CHECK(dt(1, 0) == 2.0f);
  CHECK(dt(2, 0) == 3.0f);

  // Constant matrices difference to zero; differentials are linear and
  // shift invariant.
  const Eigen::MatrixXf c = Eigen::MatrixXf::Constant(4, 5, 3.25f);
  CHECK(diff_freq(c).cwiseAbs().maxCoeff() == 0.0f);
  CHECK(diff_time(c).cwiseAbs().maxCoeff() == 0.0f);
  const Eigen::MatrixXf m1 = Eigen::MatrixXf::Random(6, 7);
  const Eigen::MatrixXf m2 = Eigen::MatrixXf::Random(6, 7);
  const float a = 2.5f, b = -1.25f;
  CHECK((diff_freq(a * m1 + b * m2) - (a * diff_freq(m1) + b * diff_freq(m2)))
            .cwiseAbs()
            .maxCoeff() < 1e-5f);
  CHECK((diff_time(a * m1 + b * m2) - (a * diff_time(m1) + b * diff_time(m2)))
            .cwiseAbs()
            .maxCoeff() < 1e-5f);
  CHECK((diff_freq(m1.array() + 5.0f) - diff_freq(m1)).cwiseAbs().maxCoeff() < 1e-5f);

  CHECK_THROWS(diff_freq(Eigen::MatrixXf::Zero(1, 4)));
  CHECK_THROWS(diff_time(Eigen::MatrixXf::Zero(4, 1)));
}
