// tests/test_phase_math.cc
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

#include "nspp/phase_math.h"

#include <doctest.h>

#include <cmath>

#include "nspp/rng.h"

using namespace nspp;

namespace {

constexpr double kPiD = kPi<double>;

// Independent oracle: four-quadrant arctangent with -pi folded to +pi.
double phi_oracle(double re, double im) {
  const double a = std::atan2(im, re);
  return a == -kPiD ? kPiD : a;
}

// Independent oracle for the anti-wrapping function: reduce into
// (-2*pi, 2*pi) and take the shorter of the direct and wrapping paths.
double anti_wrap_oracle(double x) {
  double r = std::fmod(x, 2.0 * kPiD);  // (-2*pi, 2*pi)
  const double direct = std::abs(r);
  const double wrapped = 2.0 * kPiD - std::abs(r);
  return std::min(direct, wrapped);
}

}  // namespace

TEST_CASE("sgn_star boundary and signs") {
  CHECK(sgn_star(0.0) == 1);
  CHECK(sgn_star(-0.0) == 1);
  CHECK(sgn_star(3.7) == 1);
  CHECK(sgn_star(-1e-9) == -1);
  CHECK(sgn_star(0.0f) == 1);
}

TEST_CASE("phi special values") {
  CHECK(phi(0.0, 0.0) == 0.0);
  CHECK(phi(1.0, 1.0) == doctest::Approx(kPiD / 4).epsilon(1e-15));
  CHECK(phi(-1.0, 0.0) == doctest::Approx(kPiD).epsilon(1e-15));
  CHECK(phi(0.0, -1.0) == doctest::Approx(-kPiD / 2).epsilon(1e-15));
  CHECK(phi(0.0, 1.0) == doctest::Approx(kPiD / 2).epsilon(1e-15));
  CHECK(phi(1.0, 0.0) == 0.0);
  // Third quadrant stays strictly above -pi.
  CHECK(phi(-1.0, -1e-300) > -kPiD);
}

TEST_CASE("phi agrees with the four-quadrant arctangent oracle") {
  Rng rng(7001);
  for (int i = 0; i < 100000; ++i) {
    const double re = rng.uniform(-10.0, 10.0);
    const double im = rng.uniform(-10.0, 10.0);
    const double got = phi(re, im);
    const double want = phi_oracle(re, im);
    CHECK(std::abs(got - want) < 1e-12);
  }
  // Axis-aligned values included.
  for (double v : {1.0, -1.0, 0.5, -0.5}) {
    CHECK(std::abs(phi(v, 0.0) - phi_oracle(v, 0.0)) < 1e-12);
    CHECK(std::abs(phi(0.0, v) - phi_oracle(0.0, v)) < 1e-12);
  }
}

TEST_CASE("phi range and scale invariance") {
  Rng rng(7002);
  for (int i = 0; i < 20000; ++i) {
    const double re = rng.uniform(-5.0, 5.0);
    const double im = rng.uniform(-5.0, 5.0);
    const double p = phi(re, im);
    CHECK(p > -kPiD);
    CHECK(p <= kPiD);
    // Power-of-two scaling is exact in floating point.
    CHECK(phi(2.0 * re, 2.0 * im) == p);
    const double c = rng.uniform(0.1, 100.0);
    CHECK(std::abs(phi(c * re, c * im) - p) < 1e-12);
  }
}

TEST_CASE("anti_wrap special values") {
  CHECK(anti_wrap(0.0) == 0.0);
  CHECK(anti_wrap(2.0 * kPiD) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(anti_wrap(-2.0 * kPiD) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(anti_wrap(kPiD / 2) == doctest::Approx(kPiD / 2).epsilon(1e-15));
  CHECK(anti_wrap(3.0 * kPiD / 2) == doctest::Approx(kPiD / 2).epsilon(1e-14));
  CHECK(anti_wrap(kPiD) == doctest::Approx(kPiD).epsilon(1e-15));
  CHECK(anti_wrap(-kPiD) == doctest::Approx(kPiD).epsilon(1e-15));
}

TEST_CASE("anti_wrap agrees with the two-path brute force") {
  Rng rng(7003);
  for (int i = 0; i < 100000; ++i) {
    const double x = rng.uniform(-10.0 * kPiD, 10.0 * kPiD);
    CHECK(std::abs(anti_wrap(x) - anti_wrap_oracle(x)) < 1e-12);
  }
}

TEST_CASE("anti_wrap symmetry, periodicity, range, anti-expansion") {
  Rng rng(7004);
  for (int i = 0; i < 20000; ++i) {
    const double x = rng.uniform(-20.0, 20.0);
    const double v = anti_wrap(x);
    CHECK(v >= 0.0);
    CHECK(v <= kPiD);
    CHECK(anti_wrap(-x) == doctest::Approx(v).epsilon(1e-12));
    const int k = static_cast<int>(rng.uniform_index(7)) - 3;
    CHECK(std::abs(anti_wrap(x + 2.0 * kPiD * k) - v) < 1e-10);
    CHECK(v <= std::abs(x) + 1e-15);
  }
}

TEST_CASE("anti_wrap_grad matches finite differences away from kinks") {
  Rng rng(7005);
  const double h = 1e-6;
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    const double x = rng.uniform(-10.0, 10.0);
    // Skip the kink neighborhoods x == 0 and x == pi (mod 2*pi).
    const double r = anti_wrap(x);
    if (r < 1e-4 || r > kPiD - 1e-4) continue;
    const double fd = (anti_wrap(x + h) - anti_wrap(x - h)) / (2.0 * h);
    const double an = anti_wrap_grad(x);
    CHECK(std::abs(fd - an) < 1e-4);
    CHECK(std::abs(std::abs(an) - 1.0) < 1e-15);
    ++checked;
  }
  CHECK(checked > 10000);
}

TEST_CASE("anti_wrap_grad is zero at ties and kinks") {
  CHECK(anti_wrap_grad(0.0) == 0.0);
  CHECK(anti_wrap_grad(kPiD) == 0.0);
  CHECK(anti_wrap_grad(-kPiD) == 0.0);
  CHECK(anti_wrap_grad(kPiD / 2) == 1.0);
  CHECK(anti_wrap_grad(-kPiD / 2) == -1.0);
  CHECK(anti_wrap_grad(3.0 * kPiD / 2) == -1.0);  // wrapping path
}

TEST_CASE("true_phase_error examples and identity") {
  CHECK(true_phase_error(kPiD - 0.1, -kPiD + 0.1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(true_phase_error(0.3, 0.1) == doctest::Approx(0.2).epsilon(1e-12));
  Rng rng(7006);
  for (int i = 0; i < 50000; ++i) {
    const double a = rng.uniform(-kPiD, kPiD);
    const double b = rng.uniform(-kPiD, kPiD);
    const double direct = std::abs(a - b);
    const double want = std::min(direct, 2.0 * kPiD - direct);
    CHECK(std::abs(true_phase_error(a, b) - want) < 1e-12);
    CHECK(std::abs(true_phase_error(a, b) - anti_wrap(a - b)) < 1e-12);
  }
}

TEST_CASE("wrap_to_principal") {
  CHECK(wrap_to_principal(0.0) == 0.0);
  CHECK(wrap_to_principal(kPiD) == kPiD);
  CHECK(wrap_to_principal(-kPiD) == kPiD);
  CHECK(wrap_to_principal(3.0 * kPiD) == doctest::Approx(kPiD).epsilon(1e-12));
  Rng rng(7007);
  for (int i = 0; i < 20000; ++i) {
    const double x = rng.uniform(-30.0, 30.0);
    const double w = wrap_to_principal(x);
    CHECK(w > -kPiD);
    CHECK(w <= kPiD);
    CHECK(std::abs(anti_wrap(x - w)) < 1e-9);
  }
}

TEST_CASE("float instantiation keeps the range contract") {
  Rng rng(7008);
  for (int i = 0; i < 20000; ++i) {
    const float re = static_cast<float>(rng.uniform(-3.0, 3.0));
    const float im = static_cast<float>(rng.uniform(-3.0, 3.0));
    const float p = phi(re, im);
    CHECK(p > -kPi<float>);
    CHECK(p <= kPi<float>);
    const float a = anti_wrap(static_cast<float>(rng.uniform(-50.0, 50.0)));
    CHECK(a >= 0.0f);
    CHECK(a <= kPi<float>);
  }
}
