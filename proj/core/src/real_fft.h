// src/real_fft.h
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

#ifndef NSPP_SRC_REAL_FFT_H_
#define NSPP_SRC_REAL_FFT_H_

#include <complex>
#include <vector>

namespace nspp {

// Double-precision real<->half-complex FFT of a fixed size, backed by FFTW.
// An instance is not thread safe (it owns scratch buffers); create one per
// thread.  Plan construction/destruction is serialized internally.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  int bins() const { return size_ / 2 + 1; }

  // in: size() reals; out: bins() complex values.
  void forward(const double* in, std::complex<double>* out);

  // in: bins() complex values (hermitian half); out: size() reals,
  // normalized so that inverse(forward(x)) == x.
  void inverse(const std::complex<double>* in, double* out);

 private:
  int size_;
  void* plan_fwd_;
  void* plan_inv_;
  std::vector<double> real_buf_;
  std::vector<std::complex<double>> cplx_buf_;
};

}  // namespace nspp

#endif  // NSPP_SRC_REAL_FFT_H_
