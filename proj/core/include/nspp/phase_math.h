// nspp/phase_math.h
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

#ifndef NSPP_PHASE_MATH_H_
#define NSPP_PHASE_MATH_H_

#include <cmath>
#include <limits>
#include <numbers>

// Closed-form wrapped-phase calculation and anti-wrapping machinery.
//
// All angles live in the principal value interval (-pi, pi].  Everything here
// is an elementwise pure function, templated on float/double so that training
// runs in single precision while gradient checks run in double.

namespace nspp {

template <typename S>
inline constexpr S kPi = std::numbers::pi_v<S>;

template <typename S>
inline constexpr S kTwoPi = S(2) * std::numbers::pi_v<S>;

// Sign with the boundary folded into the positive branch: x >= 0 -> +1.
// Note that this makes sgn_star(-0.0) == +1.
template <typename S>
inline int sgn_star(S x) {
  return x >= S(0) ? 1 : -1;
}

// Wrapped phase of the pseudo complex number (re, im):
//
//   phi(R, I) = arctan(I / R) - (pi / 2) * sgn_star(I) * (sgn_star(R) - 1)
//
// with phi(0, 0) = 0 and the R == 0 column handled as the arctan limit
// +-pi/2.  The result is always inside (-pi, pi]; a result that rounds to
// exactly -pi is mapped to +pi.
template <typename S>
inline S phi(S re, S im) {
  constexpr S pi = kPi<S>;
  constexpr S half_pi = pi / S(2);
  if (re == S(0)) {
    if (im == S(0)) return S(0);
    return im > S(0) ? half_pi : -half_pi;
  }
  S v = std::atan(im / re) - half_pi * S(sgn_star(im)) * S(sgn_star(re) - 1);
  if (v == -pi) v = pi;
  return v;
}

// Anti-wrapping function: |x - 2*pi*round(x / 2*pi)| in [0, pi].
//
// round() is round-half-away-from-zero (std::round).  At the measure-zero
// tie x = +-pi (mod 2*pi) both rounding conventions yield pi.
template <typename S>
inline S anti_wrap(S x) {
  constexpr S pi = kPi<S>;
  constexpr S two_pi = kTwoPi<S>;
  S v = std::abs(x - two_pi * std::round(x / two_pi));
  // Floating-point rounding can overshoot pi by an ulp; the range contract
  // is exact.
  return v < pi ? v : pi;
}

// Subgradient of anti_wrap: +-1 away from the kinks, 0 at x == 0 (mod 2*pi)
// and at the discontinuity set x == pi (mod 2*pi), where the one-sided
// derivatives disagree in sign.
template <typename S>
inline S anti_wrap_grad(S x) {
  constexpr S pi = kPi<S>;
  constexpr S two_pi = kTwoPi<S>;
  S g = x - two_pi * std::round(x / two_pi);
  if (g == S(0) || g >= pi || g <= -pi) return S(0);
  return g > S(0) ? S(1) : S(-1);
}

// True circular distance between two wrapped phases:
// min(|p_hat - p|, 2*pi - |p_hat - p|), computed via anti_wrap.
template <typename S>
inline S true_phase_error(S p_hat, S p) {
  return anti_wrap(p_hat - p);
}

// Reduce an arbitrary angle into (-pi, pi].
template <typename S>
inline S wrap_to_principal(S x) {
  constexpr S pi = kPi<S>;
  constexpr S two_pi = kTwoPi<S>;
  S g = x - two_pi * std::round(x / two_pi);
  if (g <= -pi) g = pi;
  if (g > pi) g = pi;
  return g;
}

// Gradient of phi with respect to (re, im):
//   d phi / d re = -im / (re^2 + im^2)
//   d phi / d im =  re / (re^2 + im^2)
// Defined as 0 where the squared magnitude underflows to the subnormal range.
template <typename S>
inline void phi_grad(S re, S im, S* d_re, S* d_im) {
  S denom = re * re + im * im;
  if (!(denom >= std::numeric_limits<S>::min())) {
    *d_re = S(0);
    *d_im = S(0);
    return;
  }
  *d_re = -im / denom;
  *d_im = re / denom;
}

}  // namespace nspp

#endif  // NSPP_PHASE_MATH_H_
