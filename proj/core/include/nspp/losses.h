// nspp/losses.h
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

#ifndef NSPP_LOSSES_H_
#define NSPP_LOSSES_H_

#include <stdexcept>

#include "nspp/conv.h"
#include "nspp/phase_math.h"

// Anti-wrapping training losses between predicted and natural wrapped phase
// spectra: instantaneous phase, group delay (frequency differential) and
// instantaneous angular frequency (time differential).  Each term is the
// element mean of f_AW applied to the respective residual, so every term
// lies in [0, pi].
//
// Matrices follow the library convention bins x frames.

namespace nspp {

struct LossConfig {
  bool enable_ip = true;
  bool enable_gd = true;
  bool enable_iaf = true;
  // When false, residuals pass through plain |x| instead of f_AW (the
  // L1-loss ablation).
  bool anti_wrap_enabled = true;

  void validate() const {
    if (!enable_ip && !enable_gd && !enable_iaf) {
      throw std::invalid_argument("LossConfig: at least one loss term must be enabled");
    }
  }
};

struct LossBreakdown {
  double ip = 0.0;
  double gd = 0.0;
  double iaf = 0.0;
  double total = 0.0;
};

namespace detail {

template <typename S>
inline S element_loss(S d, bool anti_wrapped) {
  return anti_wrapped ? anti_wrap(d) : std::abs(d);
}

template <typename S>
inline S element_loss_grad(S d, bool anti_wrapped) {
  if (anti_wrapped) return anti_wrap_grad(d);
  return d > S(0) ? S(1) : (d < S(0) ? S(-1) : S(0));
}

template <typename S>
void check_same_shape(const Mat<S>& a, const Mat<S>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

}  // namespace detail

// Mean over all elements of f_AW(p_hat - p).
template <typename S>
S loss_ip(const Mat<S>& p_hat, const Mat<S>& p, bool anti_wrapped = true) {
  detail::check_same_shape(p_hat, p, "loss_ip");
  if (p_hat.size() == 0) throw std::invalid_argument("loss_ip: empty matrices");
  S acc = S(0);
  for (Eigen::Index i = 0; i < p_hat.size(); ++i) {
    acc += detail::element_loss(p_hat.data()[i] - p.data()[i], anti_wrapped);
  }
  return acc / static_cast<S>(p_hat.size());
}

// Mean of f_AW over the frequency-differential residual; needs >= 2 bins.
template <typename S>
S loss_gd(const Mat<S>& p_hat, const Mat<S>& p, bool anti_wrapped = true) {
  detail::check_same_shape(p_hat, p, "loss_gd");
  if (p_hat.rows() < 2) throw std::invalid_argument("loss_gd: need at least 2 bins");
  const Eigen::Index rows = p_hat.rows(), cols = p_hat.cols();
  S acc = S(0);
  for (Eigen::Index f = 0; f < cols; ++f) {
    for (Eigen::Index k = 0; k + 1 < rows; ++k) {
      const S d = (p_hat(k + 1, f) - p_hat(k, f)) - (p(k + 1, f) - p(k, f));
      acc += detail::element_loss(d, anti_wrapped);
    }
  }
  return acc / static_cast<S>((rows - 1) * cols);
}

// Mean of f_AW over the time-differential residual; needs >= 2 frames.
template <typename S>
S loss_iaf(const Mat<S>& p_hat, const Mat<S>& p, bool anti_wrapped = true) {
  detail::check_same_shape(p_hat, p, "loss_iaf");
  if (p_hat.cols() < 2) throw std::invalid_argument("loss_iaf: need at least 2 frames");
  const Eigen::Index rows = p_hat.rows(), cols = p_hat.cols();
  S acc = S(0);
  for (Eigen::Index f = 0; f + 1 < cols; ++f) {
    for (Eigen::Index k = 0; k < rows; ++k) {
      const S d = (p_hat(k, f + 1) - p_hat(k, f)) - (p(k, f + 1) - p(k, f));
      acc += detail::element_loss(d, anti_wrapped);
    }
  }
  return acc / static_cast<S>(rows * (cols - 1));
}

// Unweighted sum of the enabled terms.
template <typename S>
LossBreakdown loss_total(const Mat<S>& p_hat, const Mat<S>& p, const LossConfig& cfg) {
  cfg.validate();
  LossBreakdown r;
  if (cfg.enable_ip) r.ip = static_cast<double>(loss_ip(p_hat, p, cfg.anti_wrap_enabled));
  if (cfg.enable_gd) r.gd = static_cast<double>(loss_gd(p_hat, p, cfg.anti_wrap_enabled));
  if (cfg.enable_iaf) r.iaf = static_cast<double>(loss_iaf(p_hat, p, cfg.anti_wrap_enabled));
  r.total = r.ip + r.gd + r.iaf;
  return r;
}

// Batched loss over items packed along the frame axis: the expectation over
// pairs is taken as the mean over items of the per-item element means, and
// time differentials never cross item boundaries.  When `d_p_hat` is
// non-null it receives dL_total/dP_hat.
template <typename S>
LossBreakdown loss_total_batched(const Mat<S>& p_hat, const Mat<S>& p, const Packing& pk,
                                 const LossConfig& cfg, Mat<S>* d_p_hat = nullptr) {
  cfg.validate();
  detail::check_same_shape(p_hat, p, "loss_total_batched");
  if (pk.total() != p_hat.cols()) throw std::invalid_argument("loss_total_batched: packing mismatch");
  const bool aw = cfg.anti_wrap_enabled;
  const Eigen::Index rows = p_hat.rows();
  const int items = pk.items();
  if (d_p_hat) d_p_hat->setZero(rows, p_hat.cols());

  LossBreakdown r;
  for (int item = 0; item < items; ++item) {
    const long b = pk.begin(item), e = pk.end(item);
    const long cols = e - b;
    if (cfg.enable_ip) {
      const S scale = S(1) / static_cast<S>(rows * cols * items);
      S acc = S(0);
      for (long f = b; f < e; ++f) {
        for (Eigen::Index k = 0; k < rows; ++k) {
          const S d = p_hat(k, f) - p(k, f);
          acc += detail::element_loss(d, aw);
          if (d_p_hat) (*d_p_hat)(k, f) += detail::element_loss_grad(d, aw) * scale;
        }
      }
      r.ip += static_cast<double>(acc) / static_cast<double>(rows * cols) / items;
    }
    if (cfg.enable_gd) {
      if (rows < 2) throw std::invalid_argument("loss_total_batched: group delay needs >= 2 bins");
      const S scale = S(1) / static_cast<S>((rows - 1) * cols * items);
      S acc = S(0);
      for (long f = b; f < e; ++f) {
        for (Eigen::Index k = 0; k + 1 < rows; ++k) {
          const S d = (p_hat(k + 1, f) - p_hat(k, f)) - (p(k + 1, f) - p(k, f));
          acc += detail::element_loss(d, aw);
          if (d_p_hat) {
            const S g = detail::element_loss_grad(d, aw) * scale;
            (*d_p_hat)(k + 1, f) += g;
            (*d_p_hat)(k, f) -= g;
          }
        }
      }
      r.gd += static_cast<double>(acc) / static_cast<double>((rows - 1) * cols) / items;
    }
    if (cfg.enable_iaf) {
      if (cols < 2) throw std::invalid_argument("loss_total_batched: angular frequency needs >= 2 frames");
      const S scale = S(1) / static_cast<S>(rows * (cols - 1) * items);
      S acc = S(0);
      for (long f = b; f + 1 < e; ++f) {
        for (Eigen::Index k = 0; k < rows; ++k) {
          const S d = (p_hat(k, f + 1) - p_hat(k, f)) - (p(k, f + 1) - p(k, f));
          acc += detail::element_loss(d, aw);
          if (d_p_hat) {
            const S g = detail::element_loss_grad(d, aw) * scale;
            (*d_p_hat)(k, f + 1) += g;
            (*d_p_hat)(k, f) -= g;
          }
        }
      }
      r.iaf += static_cast<double>(acc) / static_cast<double>(rows * (cols - 1)) / items;
    }
  }
  r.total = r.ip + r.gd + r.iaf;
  return r;
}

}  // namespace nspp

#endif  // NSPP_LOSSES_H_
