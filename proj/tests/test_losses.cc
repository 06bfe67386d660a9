// tests/test_losses.cc
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

#include "nspp/losses.h"

#include <doctest.h>

#include "nspp/rng.h"
#include "nspp/stft.h"

using namespace nspp;

namespace {

using Md = Mat<double>;

Md random_phase_matrix(Rng& rng, int rows, int cols, double span = kPi<double>) {
  Md m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-span, span);
  return m;
}

// Two-path brute force for a residual matrix mean.
double mean_true_error_oracle(const Md& d) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    double r = std::fmod(d.data()[i], 2.0 * kPi<double>);
    acc += std::min(std::abs(r), 2.0 * kPi<double> - std::abs(r));
  }
  return acc / static_cast<double>(d.size());
}

}  // namespace

TEST_CASE("losses vanish when prediction equals target") {
  Rng rng(1);
  const Md p = random_phase_matrix(rng, 6, 9);
  CHECK(loss_ip(p, p) == 0.0);
  CHECK(loss_gd(p, p) == 0.0);
  CHECK(loss_iaf(p, p) == 0.0);
  const LossBreakdown b = loss_total(p, p, LossConfig{});
  CHECK(b.total == 0.0);
}

TEST_CASE("instantaneous phase loss ignores full turns") {
  Rng rng(2);
  const Md p = random_phase_matrix(rng, 5, 7);
  const Md shifted = p.array() + 2.0 * kPi<double>;
  CHECK(loss_ip(shifted, p) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("differential losses cancel constant offsets") {
  Rng rng(3);
  const Md p = random_phase_matrix(rng, 5, 7);
  const Md shifted = p.array() + 1.2345;
  CHECK(loss_gd(shifted, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(loss_iaf(shifted, p) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("loss_ip matches the two-path oracle") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Md a = random_phase_matrix(rng, 8, 12);
    const Md b = random_phase_matrix(rng, 8, 12);
    CHECK(loss_ip(a, b) == doctest::Approx(mean_true_error_oracle(a - b)).epsilon(1e-12));
  }
}

TEST_CASE("loss_gd and loss_iaf compose diff with the ip-style mean") {
  Rng rng(5);
  auto diff_rows = [](const Md& m) {
    return Md(m.bottomRows(m.rows() - 1) - m.topRows(m.rows() - 1));
  };
  auto diff_cols = [](const Md& m) {
    return Md(m.rightCols(m.cols() - 1) - m.leftCols(m.cols() - 1));
  };
  for (int trial = 0; trial < 30; ++trial) {
    const Md a = random_phase_matrix(rng, 7, 9);
    const Md b = random_phase_matrix(rng, 7, 9);
    CHECK(loss_gd(a, b) ==
          doctest::Approx(mean_true_error_oracle(diff_rows(a) - diff_rows(b))).epsilon(1e-12));
    CHECK(loss_iaf(a, b) ==
          doctest::Approx(mean_true_error_oracle(diff_cols(a) - diff_cols(b))).epsilon(1e-12));
  }
}

TEST_CASE("loss_total sums enabled terms") {
  Rng rng(6);
  const Md a = random_phase_matrix(rng, 6, 8);
  const Md b = random_phase_matrix(rng, 6, 8);
  LossConfig all;
  const LossBreakdown t = loss_total(a, b, all);
  CHECK(t.total == doctest::Approx(t.ip + t.gd + t.iaf).epsilon(1e-12));
  CHECK(t.ip == doctest::Approx(loss_ip(a, b)).epsilon(1e-12));

  LossConfig only_ip;
  only_ip.enable_gd = only_ip.enable_iaf = false;
  const LossBreakdown t2 = loss_total(a, b, only_ip);
  CHECK(t2.total == t2.ip);
  CHECK(t2.gd == 0.0);
  CHECK(t2.iaf == 0.0);

  LossConfig none;
  none.enable_ip = none.enable_gd = none.enable_iaf = false;
  CHECK_THROWS(loss_total(a, b, none));
}

TEST_CASE("bounds, anti-expansion and symmetry") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Md a = random_phase_matrix(rng, 4, 6);
    const Md b = random_phase_matrix(rng, 4, 6);
    const double ip = loss_ip(a, b);
    const double gd = loss_gd(a, b);
    const double iaf = loss_iaf(a, b);
    for (double v : {ip, gd, iaf}) {
      CHECK(v >= 0.0);
      CHECK(v <= kPi<double>);
    }
    // Anti-wrapped losses never exceed their L1 counterparts.
    CHECK(ip <= loss_ip(a, b, false) + 1e-15);
    CHECK(gd <= loss_gd(a, b, false) + 1e-15);
    CHECK(iaf <= loss_iaf(a, b, false) + 1e-15);
    // f_AW is even, so the losses are symmetric.
    CHECK(ip == doctest::Approx(loss_ip(b, a)).epsilon(1e-12));
    CHECK(gd == doctest::Approx(loss_gd(b, a)).epsilon(1e-12));
    CHECK(iaf == doctest::Approx(loss_iaf(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("shape and size preconditions") {
  const Md a = Md::Zero(4, 4);
  const Md b = Md::Zero(4, 5);
  CHECK_THROWS(loss_ip(a, b));
  CHECK_THROWS(loss_gd(Md::Zero(1, 4), Md::Zero(1, 4)));
  CHECK_THROWS(loss_iaf(Md::Zero(4, 1), Md::Zero(4, 1)));
}

TEST_CASE("batched loss equals the mean of per-item losses") {
  Rng rng(8);
  const int items = 3, rows = 5;
  const long cols = 6;
  Md a(rows, cols * items), b(rows, cols * items);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = rng.uniform(-3.0, 3.0);
    b.data()[i] = rng.uniform(-3.0, 3.0);
  }
  const Packing pk = Packing::uniform(items, cols);
  const LossBreakdown got = loss_total_batched(a, b, pk, LossConfig{});
  double ip = 0.0, gd = 0.0, iaf = 0.0;
  for (int i = 0; i < items; ++i) {
    const Md ai = a.middleCols(i * cols, cols);
    const Md bi = b.middleCols(i * cols, cols);
    ip += loss_ip(ai, bi) / items;
    gd += loss_gd(ai, bi) / items;
    iaf += loss_iaf(ai, bi) / items;
  }
  CHECK(got.ip == doctest::Approx(ip).epsilon(1e-12));
  CHECK(got.gd == doctest::Approx(gd).epsilon(1e-12));
  CHECK(got.iaf == doctest::Approx(iaf).epsilon(1e-12));
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(9);
  const int rows = 3;
  const long cols = 4;
  const double h = 1e-6, rtol = 1e-4;

  for (const bool anti_wrap_on : {true, false}) {
    LossConfig cfg;
    cfg.anti_wrap_enabled = anti_wrap_on;
    Md a = random_phase_matrix(rng, rows, static_cast<int>(cols), 2.0);
    Md b = random_phase_matrix(rng, rows, static_cast<int>(cols), 2.0);
    const Packing pk = Packing::single(cols);

    Md grad;
    loss_total_batched(a, b, pk, cfg, &grad);

    int checked = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      // Skip elements near a kink of any loss surface: perturbing element i
      // moves its own residual and its four differential residuals.
      const auto near_kink = [&](double d) {
        const double v = anti_wrap(d);
        return v < 1e-4 || v > kPi<double> - 1e-4;
      };
      const Eigen::Index r = i % rows, c = i / rows;
      bool skip = near_kink(a(r, c) - b(r, c));
      if (r + 1 < rows) skip = skip || near_kink((a(r + 1, c) - a(r, c)) - (b(r + 1, c) - b(r, c)));
      if (r > 0) skip = skip || near_kink((a(r, c) - a(r - 1, c)) - (b(r, c) - b(r - 1, c)));
      if (c + 1 < cols) skip = skip || near_kink((a(r, c + 1) - a(r, c)) - (b(r, c + 1) - b(r, c)));
      if (c > 0) skip = skip || near_kink((a(r, c) - a(r, c - 1)) - (b(r, c) - b(r, c - 1)));
      if (skip) continue;

      const double orig = a.data()[i];
      a.data()[i] = orig + h;
      const double up = loss_total_batched(a, b, pk, cfg).total;
      a.data()[i] = orig - h;
      const double down = loss_total_batched(a, b, pk, cfg).total;
      a.data()[i] = orig;
      const double fd = (up - down) / (2.0 * h);
      const double an = grad.data()[i];
      CHECK(std::abs(fd - an) <= rtol * std::max(1.0, std::max(std::abs(fd), std::abs(an))));
      ++checked;
    }
    CHECK(checked >= 6);
  }
}

TEST_CASE("float instantiation works") {
  Rng rng(10);
  Mat<float> a(4, 5), b(4, 5);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = static_cast<float>(rng.uniform(-3.0, 3.0));
    b.data()[i] = static_cast<float>(rng.uniform(-3.0, 3.0));
  }
  const float v = loss_ip(a, b);
  CHECK(v >= 0.0f);
  CHECK(v <= kPi<float>);
}
