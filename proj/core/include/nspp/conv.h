// nspp/conv.h
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

#ifndef NSPP_CONV_H_
#define NSPP_CONV_H_

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

// 1-D convolution along the frame axis with frequency bins (or trunk
// features) as channels.  Activations are channels x frames matrices; a
// batch is packed along the frame axis with per-item boundaries, so that
// same-padding never leaks across items.
//
// Implemented as im2col + GEMM.  Weight layout: out_ch x (in_ch * kernel)
// with column index tap * in_ch + cin, i.e. the tensor shape tag is
// [out_ch, kernel, in_ch] flattened tap-major.

namespace nspp {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

struct ConvShape {
  int in_ch = 0;
  int out_ch = 0;
  int kernel = 1;
  int dilation = 1;

  // Symmetric same-padding per side; kernels must be odd.
  int pad() const { return (kernel - 1) / 2 * dilation; }
  long weight_cols() const { return static_cast<long>(in_ch) * kernel; }
};

// Frame ranges of independent items packed along the column axis.
struct Packing {
  std::vector<long> offsets;  // size items + 1, offsets[0] == 0

  static Packing single(long frames) { return Packing{{0, frames}}; }

  static Packing uniform(int items, long frames_each) {
    Packing p;
    p.offsets.resize(static_cast<std::size_t>(items) + 1);
    for (int i = 0; i <= items; ++i) p.offsets[static_cast<std::size_t>(i)] = i * frames_each;
    return p;
  }

  int items() const { return static_cast<int>(offsets.size()) - 1; }
  long total() const { return offsets.back(); }
  long begin(int i) const { return offsets[static_cast<std::size_t>(i)]; }
  long end(int i) const { return offsets[static_cast<std::size_t>(i) + 1]; }
};

namespace detail {

inline void check_conv_args(const Eigen::Index x_rows, const Eigen::Index x_cols,
                            const ConvShape& shape, const Packing& pk) {
  if (shape.kernel < 1 || shape.kernel % 2 == 0) {
    throw std::invalid_argument("conv1d: kernel size must be odd, got " + std::to_string(shape.kernel));
  }
  if (shape.dilation < 1) throw std::invalid_argument("conv1d: dilation must be positive");
  if (x_rows != shape.in_ch) {
    throw std::invalid_argument("conv1d: input has " + std::to_string(x_rows) +
                                " channels, expected " + std::to_string(shape.in_ch));
  }
  if (pk.items() < 1 || pk.total() != x_cols) {
    throw std::invalid_argument("conv1d: packing does not match input frames");
  }
}

// cols: (in_ch * kernel) x T.  Out-of-item taps are zero.
template <typename S>
void im2col(const Mat<S>& x, const ConvShape& shape, const Packing& pk, Mat<S>& cols) {
  const int k = shape.kernel;
  const int c_in = shape.in_ch;
  const int center = (k - 1) / 2;
  cols.resize(static_cast<long>(c_in) * k, x.cols());
  for (int tap = 0; tap < k; ++tap) {
    const long shift = static_cast<long>(tap - center) * shape.dilation;
    auto slab = cols.middleRows(static_cast<long>(tap) * c_in, c_in);
    for (int item = 0; item < pk.items(); ++item) {
      const long b = pk.begin(item), e = pk.end(item);
      // Destination frames f in [b, e) read source f + shift clipped to the item.
      const long f0 = std::max(b, b - shift);
      const long f1 = std::min(e, e - shift);
      if (f0 > b) slab.middleCols(b, f0 - b).setZero();
      if (f1 < e) slab.middleCols(f1, e - f1).setZero();
      if (f1 > f0) slab.middleCols(f0, f1 - f0) = x.middleCols(f0 + shift, f1 - f0);
    }
  }
}

// Transpose of im2col: scatter-add column slabs back onto the input grid.
template <typename S>
void col2im_add(const Mat<S>& cols, const ConvShape& shape, const Packing& pk, Mat<S>& dx) {
  const int k = shape.kernel;
  const int c_in = shape.in_ch;
  const int center = (k - 1) / 2;
  for (int tap = 0; tap < k; ++tap) {
    const long shift = static_cast<long>(tap - center) * shape.dilation;
    const auto slab = cols.middleRows(static_cast<long>(tap) * c_in, c_in);
    for (int item = 0; item < pk.items(); ++item) {
      const long b = pk.begin(item), e = pk.end(item);
      const long f0 = std::max(b, b - shift);
      const long f1 = std::min(e, e - shift);
      if (f1 > f0) dx.middleCols(f0 + shift, f1 - f0) += slab.middleCols(f0, f1 - f0);
    }
  }
}

}  // namespace detail

template <typename S>
void conv1d_forward(const Mat<S>& x, const Mat<S>& w, const Mat<S>& b, const ConvShape& shape,
                    const Packing& pk, Mat<S>& y) {
  detail::check_conv_args(x.rows(), x.cols(), shape, pk);
  if (w.rows() != shape.out_ch || w.cols() != shape.weight_cols()) {
    throw std::invalid_argument("conv1d: weight shape mismatch");
  }
  if (b.rows() != shape.out_ch || b.cols() != 1) {
    throw std::invalid_argument("conv1d: bias shape mismatch");
  }
  Mat<S> cols;
  detail::im2col(x, shape, pk, cols);
  y.noalias() = w * cols;
  y.colwise() += b.col(0);
}

// Gradients of a conv1d call.  dw/db are accumulated into (+=); dx, when
// non-null, is overwritten.
template <typename S>
void conv1d_backward(const Mat<S>& x, const Mat<S>& w, const ConvShape& shape, const Packing& pk,
                     const Mat<S>& dy, Mat<S>* dx, Mat<S>& dw, Mat<S>& db) {
  detail::check_conv_args(x.rows(), x.cols(), shape, pk);
  if (dy.rows() != shape.out_ch || dy.cols() != x.cols()) {
    throw std::invalid_argument("conv1d_backward: dy shape mismatch");
  }
  Mat<S> cols;
  detail::im2col(x, shape, pk, cols);
  dw.noalias() += dy * cols.transpose();
  db.col(0).noalias() += dy.rowwise().sum();
  if (dx != nullptr) {
    dx->setZero(x.rows(), x.cols());
    Mat<S> dcols;
    dcols.noalias() = w.transpose() * dy;
    detail::col2im_add(dcols, shape, pk, *dx);
  }
}

template <typename S>
Mat<S> lrelu(const Mat<S>& x, S slope) {
  return (x.array() >= S(0)).select(x, x * slope);
}

// dL/dx given the pre-activation input x.
template <typename S>
Mat<S> lrelu_backward(const Mat<S>& x, const Mat<S>& dy, S slope) {
  return (x.array() >= S(0)).select(dy, dy * slope);
}

}  // namespace nspp

#endif  // NSPP_CONV_H_
