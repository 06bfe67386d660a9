// nspp/model.h
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

#ifndef NSPP_MODEL_H_
#define NSPP_MODEL_H_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "nspp/conv.h"
#include "nspp/phase_math.h"
#include "nspp/rng.h"

// The phase prediction network: a pre-convolution, three parallel residual
// convolutional blocks (each a cascade of three dilated sub-blocks), and two
// parallel output convolutions whose pseudo real/imaginary outputs are turned
// into wrapped phases by phi().  Convolutions run along the frame axis with
// frequency bins as input channels.
//
// Everything is templated on float/double: training uses float, gradient
// checks instantiate double.

namespace nspp {

struct ModelConfig {
  int input_bins = 513;
  int trunk_channels = 512;
  int pre_kernel = 7;
  std::array<int, 3> block_kernels{3, 7, 11};
  std::array<int, 3> sub_block_dilations{1, 3, 5};
  int output_kernel = 7;
  float lrelu_slope = 0.1f;
  // Ablation switch: when false, a single linear output layer emits the
  // phase directly, without any range restriction.
  bool use_parallel_estimation = true;

  void validate() const {
    if (input_bins < 1) throw std::invalid_argument("ModelConfig: input_bins must be >= 1");
    if (trunk_channels < 1) throw std::invalid_argument("ModelConfig: trunk_channels must be >= 1");
    auto check_odd = [](int k, const char* what) {
      if (k < 1 || k % 2 == 0) {
        throw std::invalid_argument(std::string("ModelConfig: ") + what + " must be odd and positive");
      }
    };
    check_odd(pre_kernel, "pre_kernel");
    check_odd(output_kernel, "output_kernel");
    for (int k : block_kernels) check_odd(k, "block kernel");
    for (int d : sub_block_dilations) {
      if (d < 1) throw std::invalid_argument("ModelConfig: dilations must be positive");
    }
    if (!(lrelu_slope > 0.0f && lrelu_slope < 1.0f)) {
      throw std::invalid_argument("ModelConfig: lrelu_slope must be in (0, 1)");
    }
  }

  ConvShape pre_shape() const { return {input_bins, trunk_channels, pre_kernel, 1}; }
  ConvShape sub_conv1_shape(int block, int sub) const {
    return {trunk_channels, trunk_channels, block_kernels[static_cast<std::size_t>(block)],
            sub_block_dilations[static_cast<std::size_t>(sub)]};
  }
  ConvShape sub_conv2_shape(int block) const {
    return {trunk_channels, trunk_channels, block_kernels[static_cast<std::size_t>(block)], 1};
  }
  ConvShape out_shape() const { return {trunk_channels, input_bins, output_kernel, 1}; }

  // Frames on either side of an output frame that can influence it.
  // Blocks are parallel, so the network radius is the widest block's.
  int receptive_field_radius() const {
    int widest = 0;
    for (std::size_t b = 0; b < 3; ++b) {
      int r = 0;
      for (std::size_t s = 0; s < 3; ++s) {
        r += (block_kernels[b] - 1) / 2 * sub_block_dilations[s];  // dilated conv
        r += (block_kernels[b] - 1) / 2;                           // second conv
      }
      widest = std::max(widest, r);
    }
    return (pre_kernel - 1) / 2 + widest + (output_kernel - 1) / 2;
  }
};

template <typename S>
struct ConvLayer {
  Mat<S> w;  // out_ch x (in_ch * kernel)
  Mat<S> b;  // out_ch x 1
};

template <typename S>
struct SubBlockParams {
  ConvLayer<S> conv1;  // dilated
  ConvLayer<S> conv2;
};

template <typename S>
struct BlockParams {
  std::array<SubBlockParams<S>, 3> sub;
};

template <typename S>
struct ModelParams {
  ModelConfig cfg;
  ConvLayer<S> pre;
  std::array<BlockParams<S>, 3> block;
  ConvLayer<S> out_real;  // the single output layer when PEA is disabled
  ConvLayer<S> out_imag;  // unused when PEA is disabled

  // Visits every tensor in a fixed order; `fn(name, matrix)`.  The order
  // defines the checkpoint layout and the optimizer slot order.
  template <typename Fn>
  void for_each_tensor(Fn&& fn) {
    fn("pre.w", pre.w);
    fn("pre.b", pre.b);
    for (int b = 0; b < 3; ++b) {
      for (int s = 0; s < 3; ++s) {
        const std::string base = "rcb" + std::to_string(b) + ".sub" + std::to_string(s);
        fn(base + ".conv1.w", block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)].conv1.w);
        fn(base + ".conv1.b", block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)].conv1.b);
        fn(base + ".conv2.w", block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)].conv2.w);
        fn(base + ".conv2.b", block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)].conv2.b);
      }
    }
    if (cfg.use_parallel_estimation) {
      fn("out_r.w", out_real.w);
      fn("out_r.b", out_real.b);
      fn("out_i.w", out_imag.w);
      fn("out_i.b", out_imag.b);
    } else {
      fn("out.w", out_real.w);
      fn("out.b", out_real.b);
    }
  }

  template <typename Fn>
  void for_each_tensor(Fn&& fn) const {
    const_cast<ModelParams*>(this)->for_each_tensor(
        [&fn](const std::string& name, Mat<S>& m) { fn(name, static_cast<const Mat<S>&>(m)); });
  }

  long parameter_count() const {
    long n = 0;
    for_each_tensor([&n](const std::string&, const Mat<S>& m) { n += m.size(); });
    return n;
  }
};

namespace detail {

template <typename S>
void size_layer(ConvLayer<S>& layer, const ConvShape& shape) {
  layer.w.resize(shape.out_ch, shape.weight_cols());
  layer.b.resize(shape.out_ch, 1);
}

template <typename S>
void size_params(ModelParams<S>& p) {
  size_layer(p.pre, p.cfg.pre_shape());
  for (int b = 0; b < 3; ++b) {
    for (int s = 0; s < 3; ++s) {
      size_layer(p.block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)].conv1,
                 p.cfg.sub_conv1_shape(b, s));
      size_layer(p.block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)].conv2,
                 p.cfg.sub_conv2_shape(b));
    }
  }
  size_layer(p.out_real, p.cfg.out_shape());
  if (p.cfg.use_parallel_estimation) {
    size_layer(p.out_imag, p.cfg.out_shape());
  } else {
    p.out_imag.w.resize(0, 0);
    p.out_imag.b.resize(0, 0);
  }
}

}  // namespace detail

// Deterministic initialization: convolution kernels ~ N(0, 0.01^2), biases 0.
template <typename S>
ModelParams<S> init_params(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ModelParams<S> p;
  p.cfg = cfg;
  detail::size_params(p);
  Rng rng(seed);
  constexpr double kWeightStd = 0.01;
  p.for_each_tensor([&rng](const std::string& name, Mat<S>& m) {
    if (name.ends_with(".b")) {
      m.setZero();
    } else {
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = static_cast<S>(kWeightStd * rng.normal());
      }
    }
  });
  return p;
}

// Same structure as `like`, every tensor zero.  Used for gradients and
// optimizer moments.
template <typename S>
ModelParams<S> zeros_like(const ModelParams<S>& like) {
  ModelParams<S> p;
  p.cfg = like.cfg;
  detail::size_params(p);
  p.for_each_tensor([](const std::string&, Mat<S>& m) { m.setZero(); });
  return p;
}

template <typename S>
struct ForwardTrace {
  Packing pk;
  Mat<S> input;    // bins x T
  Mat<S> pre_out;  // trunk x T
  struct Sub {
    Mat<S> act1;       // lrelu(x_in)
    Mat<S> conv1_out;  // dilated conv output (pre-activation)
    Mat<S> act2;       // lrelu(conv1_out)
    Mat<S> out;        // x_in + conv2(act2)
  };
  std::array<std::array<Sub, 3>, 3> sub;  // [block][sub]
  Mat<S> sum_avg;  // block outputs summed / 3 (pre-activation)
  Mat<S> trunk;    // lrelu(sum_avg)
  Mat<S> r_hat, i_hat;  // PEA only
  Mat<S> phase;

  const Mat<S>& sub_input(int b, int s) const {
    return s == 0 ? pre_out : sub[static_cast<std::size_t>(b)][static_cast<std::size_t>(s) - 1].out;
  }
};

template <typename S>
struct ModelOutput {
  Mat<S> phase;        // bins x T
  Mat<S> pseudo_real;  // empty when PEA is disabled
  Mat<S> pseudo_imag;
};

// Trunk: pre-conv, three parallel blocks, sum / 3, LReLU.
// Returns trunk_channels x T.  When `trace` is non-null, every intermediate
// needed by nspp_backward is recorded there.
template <typename S>
Mat<S> rcnet_forward(const ModelParams<S>& params, const Mat<S>& log_amp, const Packing& pk,
                     ForwardTrace<S>* trace = nullptr) {
  const ModelConfig& cfg = params.cfg;
  if (log_amp.rows() != cfg.input_bins) {
    throw std::invalid_argument("rcnet_forward: input has " + std::to_string(log_amp.rows()) +
                                " bins, model expects " + std::to_string(cfg.input_bins));
  }
  if (!log_amp.allFinite()) throw std::invalid_argument("rcnet_forward: non-finite input");
  const S slope = static_cast<S>(cfg.lrelu_slope);

  Mat<S> pre_out;
  conv1d_forward(log_amp, params.pre.w, params.pre.b, cfg.pre_shape(), pk, pre_out);

  Mat<S> sum;
  for (int b = 0; b < 3; ++b) {
    Mat<S> x = pre_out;
    for (int s = 0; s < 3; ++s) {
      const auto& sp = params.block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)];
      Mat<S> a1 = lrelu(x, slope);
      Mat<S> c1;
      conv1d_forward(a1, sp.conv1.w, sp.conv1.b, cfg.sub_conv1_shape(b, s), pk, c1);
      Mat<S> a2 = lrelu(c1, slope);
      Mat<S> c2;
      conv1d_forward(a2, sp.conv2.w, sp.conv2.b, cfg.sub_conv2_shape(b), pk, c2);
      Mat<S> out = x + c2;
      if (trace) {
        auto& t = trace->sub[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
        t.act1 = std::move(a1);
        t.conv1_out = std::move(c1);
        t.act2 = std::move(a2);
        t.out = out;
      }
      x = std::move(out);
    }
    if (b == 0) {
      sum = std::move(x);
    } else {
      sum += x;
    }
  }
  sum /= S(3);
  Mat<S> trunk = lrelu(sum, slope);
  if (trace) {
    trace->pk = pk;
    trace->input = log_amp;
    trace->pre_out = std::move(pre_out);
    trace->sum_avg = std::move(sum);
    trace->trunk = trunk;
  }
  return trunk;
}

// Full forward pass to wrapped phase (plus the pseudo real/imaginary parts
// when the parallel estimation architecture is enabled).
template <typename S>
ModelOutput<S> nspp_forward(const ModelParams<S>& params, const Mat<S>& log_amp, const Packing& pk,
                            ForwardTrace<S>* trace = nullptr) {
  const ModelConfig& cfg = params.cfg;
  Mat<S> trunk = rcnet_forward(params, log_amp, pk, trace);

  ModelOutput<S> out;
  if (cfg.use_parallel_estimation) {
    Mat<S> r, i;
    conv1d_forward(trunk, params.out_real.w, params.out_real.b, cfg.out_shape(), pk, r);
    conv1d_forward(trunk, params.out_imag.w, params.out_imag.b, cfg.out_shape(), pk, i);
    out.phase.resize(r.rows(), r.cols());
    for (Eigen::Index n = 0; n < r.size(); ++n) {
      out.phase.data()[n] = phi(r.data()[n], i.data()[n]);
    }
    if (trace) {
      trace->r_hat = r;
      trace->i_hat = i;
      trace->phase = out.phase;
    }
    out.pseudo_real = std::move(r);
    out.pseudo_imag = std::move(i);
  } else {
    conv1d_forward(trunk, params.out_real.w, params.out_real.b, cfg.out_shape(), pk, out.phase);
    if (trace) trace->phase = out.phase;
  }
  return out;
}

template <typename S>
ModelOutput<S> nspp_forward(const ModelParams<S>& params, const Mat<S>& log_amp) {
  return nspp_forward(params, log_amp, Packing::single(log_amp.cols()));
}

// Backpropagates d_phase (dL/dP, bins x T) through the whole network,
// accumulating parameter gradients into `grads` (same structure, caller
// zeroes).  Requires the trace recorded by nspp_forward.
template <typename S>
void nspp_backward(const ModelParams<S>& params, const ForwardTrace<S>& trace,
                   const Mat<S>& d_phase, ModelParams<S>& grads) {
  const ModelConfig& cfg = params.cfg;
  const Packing& pk = trace.pk;
  const S slope = static_cast<S>(cfg.lrelu_slope);

  Mat<S> d_trunk;
  if (cfg.use_parallel_estimation) {
    Mat<S> d_r(d_phase.rows(), d_phase.cols());
    Mat<S> d_i(d_phase.rows(), d_phase.cols());
    for (Eigen::Index n = 0; n < d_phase.size(); ++n) {
      S gr, gi;
      phi_grad(trace.r_hat.data()[n], trace.i_hat.data()[n], &gr, &gi);
      d_r.data()[n] = d_phase.data()[n] * gr;
      d_i.data()[n] = d_phase.data()[n] * gi;
    }
    Mat<S> d_trunk_r, d_trunk_i;
    conv1d_backward(trace.trunk, params.out_real.w, cfg.out_shape(), pk, d_r, &d_trunk_r,
                    grads.out_real.w, grads.out_real.b);
    conv1d_backward(trace.trunk, params.out_imag.w, cfg.out_shape(), pk, d_i, &d_trunk_i,
                    grads.out_imag.w, grads.out_imag.b);
    d_trunk = d_trunk_r + d_trunk_i;
  } else {
    conv1d_backward(trace.trunk, params.out_real.w, cfg.out_shape(), pk, d_phase, &d_trunk,
                    grads.out_real.w, grads.out_real.b);
  }

  // trunk = lrelu(sum_avg); each block receives d_sum / 3.
  Mat<S> d_sum = lrelu_backward(trace.sum_avg, d_trunk, slope);
  d_sum /= S(3);

  Mat<S> d_pre = Mat<S>::Zero(trace.pre_out.rows(), trace.pre_out.cols());
  for (int b = 0; b < 3; ++b) {
    Mat<S> d_out = d_sum;
    for (int s = 2; s >= 0; --s) {
      const auto& sp = params.block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)];
      auto& sg = grads.block[static_cast<std::size_t>(b)].sub[static_cast<std::size_t>(s)];
      const auto& t = trace.sub[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
      const Mat<S>& x_in = trace.sub_input(b, s);

      Mat<S> d_act2;
      conv1d_backward(t.act2, sp.conv2.w, cfg.sub_conv2_shape(b), pk, d_out, &d_act2,
                      sg.conv2.w, sg.conv2.b);
      Mat<S> d_c1 = lrelu_backward(t.conv1_out, d_act2, slope);
      Mat<S> d_act1;
      conv1d_backward(t.act1, sp.conv1.w, cfg.sub_conv1_shape(b, s), pk, d_c1, &d_act1,
                      sg.conv1.w, sg.conv1.b);
      // Residual: d_x = d_out (skip path) + lrelu'(x_in) . d_act1.
      Mat<S> d_x = lrelu_backward(x_in, d_act1, slope);
      d_x += d_out;
      d_out = std::move(d_x);
    }
    d_pre += d_out;
  }

  conv1d_backward(trace.input, params.pre.w, cfg.pre_shape(), pk, d_pre, static_cast<Mat<S>*>(nullptr),
                  grads.pre.w, grads.pre.b);
}

}  // namespace nspp

#endif  // NSPP_MODEL_H_
