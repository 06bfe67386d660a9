// src/real_fft.cc
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

#include "real_fft.h"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace nspp {

namespace {
// The FFTW planner is not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(int size)
    : size_(size), real_buf_(size), cplx_buf_(size / 2 + 1) {
  if (size < 2 || (size & (size - 1)) != 0) {
    throw std::invalid_argument("RealFft: size must be a power of two >= 2");
  }
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_r2c_1d(
      size_, real_buf_.data(), reinterpret_cast<fftw_complex*>(cplx_buf_.data()),
      FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r_1d(
      size_, reinterpret_cast<fftw_complex*>(cplx_buf_.data()), real_buf_.data(),
      FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("RealFft: planning failed");
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void RealFft::forward(const double* in, std::complex<double>* out) {
  std::memcpy(real_buf_.data(), in, sizeof(double) * size_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::memcpy(out, cplx_buf_.data(), sizeof(std::complex<double>) * bins());
}

void RealFft::inverse(const std::complex<double>* in, double* out) {
  std::memcpy(cplx_buf_.data(), in, sizeof(std::complex<double>) * bins());
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  const double scale = 1.0 / size_;
  for (int i = 0; i < size_; ++i) out[i] = real_buf_[i] * scale;
}

}  // namespace nspp
