#pragma once

#include <cmath>
#include <random>

#include "gazekit/nn/im2col.hpp"
#include "gazekit/nn/param.hpp"

namespace gazekit::nn {

template <typename S>
using MatMap = Eigen::Map<Mat<S>>;
template <typename S>
using ConstMatMap = Eigen::Map<const Mat<S>>;

// ---------------------------------------------------------------------------
// Convolution. Weight layout [out][in][kh][kw]; bias optional (dropped when a
// batch norm follows, which would cancel it anyway).
template <typename S>
struct Conv2d {
  int in_ch = 0, out_ch = 0, k = 4, stride = 2, pad = 1;
  bool has_bias = true;
  Param<S> weight, bias;
  Tensor<S> cached_in;

  Conv2d() = default;
  Conv2d(int in, int out, int k_, int stride_, int pad_, bool bias_)
      : in_ch(in), out_ch(out), k(k_), stride(stride_), pad(pad_), has_bias(bias_) {
    weight.kind = ParamKind::ConvWeight;
    weight.resize(static_cast<Eigen::Index>(out_ch) * in_ch * k * k);
    bias.kind = ParamKind::ConvBias;
    if (has_bias) bias.resize(out_ch);
  }

  int out_side(int side) const { return (side + 2 * pad - k) / stride + 1; }

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    if (x.c != in_ch)
      throw ConfigError("conv: input has " + std::to_string(x.c) + " channels, expected " +
                        std::to_string(in_ch));
    if (train) cached_in = x;
    const int ho = out_side(x.h), wo = out_side(x.w);
    Tensor<S> y(x.n, out_ch, ho, wo);
    const Eigen::Index rows = static_cast<Eigen::Index>(ho) * wo;
    ConstMatMap<S> wt(weight.value.data(), static_cast<Eigen::Index>(in_ch) * k * k, out_ch);
    Mat<S> cols;
    for (int ni = 0; ni < x.n; ++ni) {
      im2col(x.plane(ni, 0), in_ch, x.h, x.w, k, stride, pad, ho, wo, cols);
      MatMap<S> out(y.plane(ni, 0), rows, out_ch);
      out.noalias() = cols * wt;
      if (has_bias)
        for (int co = 0; co < out_ch; ++co) out.col(co).array() += bias.value[co];
    }
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy) {
    const Tensor<S>& x = cached_in;
    const int ho = gy.h, wo = gy.w;
    const Eigen::Index rows = static_cast<Eigen::Index>(ho) * wo;
    Tensor<S> gx(x.n, in_ch, x.h, x.w);
    ConstMatMap<S> wt(weight.value.data(), static_cast<Eigen::Index>(in_ch) * k * k, out_ch);
    MatMap<S> gw(weight.grad.data(), static_cast<Eigen::Index>(in_ch) * k * k, out_ch);
    Mat<S> cols, gcols;
    for (int ni = 0; ni < x.n; ++ni) {
      im2col(x.plane(ni, 0), in_ch, x.h, x.w, k, stride, pad, ho, wo, cols);
      ConstMatMap<S> gout(gy.plane(ni, 0), rows, out_ch);
      gw.noalias() += cols.transpose() * gout;
      if (has_bias)
        for (int co = 0; co < out_ch; ++co) bias.grad[co] += gout.col(co).sum();
      gcols.noalias() = gout * wt.transpose();
      col2im_add(gcols, gx.plane(ni, 0), in_ch, x.h, x.w, k, stride, pad, ho, wo);
    }
    return gx;
  }

  void collect(const std::string& prefix, std::vector<Param<S>*>& out) {
    weight.name = prefix + ".weight";
    out.push_back(&weight);
    if (has_bias) {
      bias.name = prefix + ".bias";
      out.push_back(&bias);
    }
  }
};

// ---------------------------------------------------------------------------
// Transposed convolution (fractionally strided). Weight layout [in][out][kh][kw].
template <typename S>
struct ConvTranspose2d {
  int in_ch = 0, out_ch = 0, k = 4, stride = 2, pad = 1;
  bool has_bias = true;
  Param<S> weight, bias;
  Tensor<S> cached_in;

  ConvTranspose2d() = default;
  ConvTranspose2d(int in, int out, int k_, int stride_, int pad_, bool bias_)
      : in_ch(in), out_ch(out), k(k_), stride(stride_), pad(pad_), has_bias(bias_) {
    weight.kind = ParamKind::ConvWeight;
    weight.resize(static_cast<Eigen::Index>(in_ch) * out_ch * k * k);
    bias.kind = ParamKind::ConvBias;
    if (has_bias) bias.resize(out_ch);
  }

  int out_side(int side) const { return (side - 1) * stride - 2 * pad + k; }

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    if (x.c != in_ch)
      throw ConfigError("conv_transpose: input has " + std::to_string(x.c) +
                        " channels, expected " + std::to_string(in_ch));
    if (train) cached_in = x;
    const int ho = out_side(x.h), wo = out_side(x.w);
    Tensor<S> y(x.n, out_ch, ho, wo);
    const Eigen::Index rows = static_cast<Eigen::Index>(x.h) * x.w;
    ConstMatMap<S> wct(weight.value.data(), static_cast<Eigen::Index>(out_ch) * k * k, in_ch);
    Mat<S> cols;
    for (int ni = 0; ni < x.n; ++ni) {
      ConstMatMap<S> xin(x.plane(ni, 0), rows, in_ch);
      cols.noalias() = xin * wct.transpose();  // rows x (out_ch*k*k)
      col2im_add(cols, y.plane(ni, 0), out_ch, ho, wo, k, stride, pad, x.h, x.w);
      if (has_bias) {
        MatMap<S> out(y.plane(ni, 0), static_cast<Eigen::Index>(ho) * wo, out_ch);
        for (int co = 0; co < out_ch; ++co) out.col(co).array() += bias.value[co];
      }
    }
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy) {
    const Tensor<S>& x = cached_in;
    const Eigen::Index rows = static_cast<Eigen::Index>(x.h) * x.w;
    Tensor<S> gx(x.n, in_ch, x.h, x.w);
    ConstMatMap<S> wct(weight.value.data(), static_cast<Eigen::Index>(out_ch) * k * k, in_ch);
    MatMap<S> gw(weight.grad.data(), static_cast<Eigen::Index>(out_ch) * k * k, in_ch);
    Mat<S> gcols;
    for (int ni = 0; ni < x.n; ++ni) {
      im2col(gy.plane(ni, 0), out_ch, gy.h, gy.w, k, stride, pad, x.h, x.w, gcols);
      ConstMatMap<S> xin(x.plane(ni, 0), rows, in_ch);
      gw.noalias() += gcols.transpose() * xin;
      if (has_bias) {
        ConstMatMap<S> gout(gy.plane(ni, 0), static_cast<Eigen::Index>(gy.h) * gy.w, out_ch);
        for (int co = 0; co < out_ch; ++co) bias.grad[co] += gout.col(co).sum();
      }
      MatMap<S> gxm(gx.plane(ni, 0), rows, in_ch);
      gxm.noalias() = gcols * wct;
    }
    return gx;
  }

  void collect(const std::string& prefix, std::vector<Param<S>*>& out) {
    weight.name = prefix + ".weight";
    out.push_back(&weight);
    if (has_bias) {
      bias.name = prefix + ".bias";
      out.push_back(&bias);
    }
  }
};

// ---------------------------------------------------------------------------
// Batch normalization over (N, H, W) per channel. Train mode normalizes with
// biased batch statistics and tracks running stats (unbiased variance); eval
// mode applies the running stats.
template <typename S>
struct BatchNorm2d {
  int ch = 0;
  S eps = S(1e-5), momentum = S(0.1);
  Param<S> gamma, beta, running_mean, running_var;

  // forward cache
  Tensor<S> xhat;
  Vec<S> inv_std;

  BatchNorm2d() = default;
  explicit BatchNorm2d(int ch_) : ch(ch_) {
    gamma.kind = ParamKind::BnGamma;
    gamma.resize(ch);
    gamma.value.setOnes();
    beta.kind = ParamKind::BnBeta;
    beta.resize(ch);
    running_mean.kind = ParamKind::Buffer;
    running_mean.resize(ch);
    running_var.kind = ParamKind::Buffer;
    running_var.resize(ch);
    running_var.value.setOnes();
  }

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    Tensor<S> y(x.n, x.c, x.h, x.w);
    const Eigen::Index plane = static_cast<Eigen::Index>(x.h) * x.w;
    const Eigen::Index m = static_cast<Eigen::Index>(x.n) * plane;
    if (train) {
      xhat = Tensor<S>(x.n, x.c, x.h, x.w);
      inv_std = Vec<S>::Zero(ch);
      for (int ci = 0; ci < ch; ++ci) {
        S mean = 0, var = 0;
        for (int ni = 0; ni < x.n; ++ni)
          mean += Eigen::Map<const Vec<S>>(x.plane(ni, ci), plane).sum();
        mean /= S(m);
        for (int ni = 0; ni < x.n; ++ni)
          var += (Eigen::Map<const Vec<S>>(x.plane(ni, ci), plane) - mean).square().sum();
        var /= S(m);
        inv_std[ci] = S(1) / std::sqrt(var + eps);
        for (int ni = 0; ni < x.n; ++ni) {
          auto xm = Eigen::Map<const Vec<S>>(x.plane(ni, ci), plane);
          Eigen::Map<Vec<S>> xh(xhat.plane(ni, ci), plane);
          xh = (xm - mean) * inv_std[ci];
          Eigen::Map<Vec<S>>(y.plane(ni, ci), plane) = gamma.value[ci] * xh + beta.value[ci];
        }
        const S unbiased = m > 1 ? var * S(m) / S(m - 1) : var;
        running_mean.value[ci] = (S(1) - momentum) * running_mean.value[ci] + momentum * mean;
        running_var.value[ci] = (S(1) - momentum) * running_var.value[ci] + momentum * unbiased;
      }
    } else {
      for (int ci = 0; ci < ch; ++ci) {
        const S scale = gamma.value[ci] / std::sqrt(running_var.value[ci] + eps);
        const S shift = beta.value[ci] - scale * running_mean.value[ci];
        for (int ni = 0; ni < x.n; ++ni)
          Eigen::Map<Vec<S>>(y.plane(ni, ci), plane) =
              scale * Eigen::Map<const Vec<S>>(x.plane(ni, ci), plane) + shift;
      }
    }
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy) {
    Tensor<S> gx(gy.n, gy.c, gy.h, gy.w);
    const Eigen::Index plane = static_cast<Eigen::Index>(gy.h) * gy.w;
    const Eigen::Index m = static_cast<Eigen::Index>(gy.n) * plane;
    for (int ci = 0; ci < ch; ++ci) {
      S sum_gy = 0, sum_gy_xhat = 0;
      for (int ni = 0; ni < gy.n; ++ni) {
        auto g = Eigen::Map<const Vec<S>>(gy.plane(ni, ci), plane);
        auto xh = Eigen::Map<const Vec<S>>(xhat.plane(ni, ci), plane);
        sum_gy += g.sum();
        sum_gy_xhat += (g * xh).sum();
      }
      beta.grad[ci] += sum_gy;
      gamma.grad[ci] += sum_gy_xhat;
      const S scale = gamma.value[ci] * inv_std[ci];
      const S mean_gy = sum_gy / S(m), mean_gy_xhat = sum_gy_xhat / S(m);
      for (int ni = 0; ni < gy.n; ++ni) {
        auto g = Eigen::Map<const Vec<S>>(gy.plane(ni, ci), plane);
        auto xh = Eigen::Map<const Vec<S>>(xhat.plane(ni, ci), plane);
        Eigen::Map<Vec<S>>(gx.plane(ni, ci), plane) = scale * (g - mean_gy - xh * mean_gy_xhat);
      }
    }
    return gx;
  }

  void collect(const std::string& prefix, std::vector<Param<S>*>& out) {
    gamma.name = prefix + ".gamma";
    beta.name = prefix + ".beta";
    running_mean.name = prefix + ".running_mean";
    running_var.name = prefix + ".running_var";
    out.push_back(&gamma);
    out.push_back(&beta);
    out.push_back(&running_mean);
    out.push_back(&running_var);
  }
};

// ---------------------------------------------------------------------------
// Activations.
template <typename S>
struct LeakyReLU {
  S slope = S(0.2);
  Tensor<S> cached_in;

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    if (train) cached_in = x;
    Tensor<S> y = x;
    y.data = (x.data > S(0)).select(x.data, slope * x.data);
    return y;
  }
  Tensor<S> backward(const Tensor<S>& gy) {
    Tensor<S> gx = gy;
    gx.data = (cached_in.data > S(0)).select(gy.data, slope * gy.data);
    return gx;
  }
};

template <typename S>
struct ReLU {
  Tensor<S> cached_in;

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    if (train) cached_in = x;
    Tensor<S> y = x;
    y.data = x.data.max(S(0));
    return y;
  }
  Tensor<S> backward(const Tensor<S>& gy) {
    Tensor<S> gx = gy;
    gx.data = (cached_in.data > S(0)).select(gy.data, S(0));
    return gx;
  }
};

template <typename S>
struct Tanh {
  Tensor<S> cached_out;

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    Tensor<S> y = x;
    y.data = x.data.tanh();
    if (train) cached_out = y;
    return y;
  }
  Tensor<S> backward(const Tensor<S>& gy) {
    Tensor<S> gx = gy;
    gx.data = gy.data * (S(1) - cached_out.data.square());
    return gx;
  }
};

template <typename S>
struct Sigmoid {
  Tensor<S> cached_out;

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    Tensor<S> y = x;
    y.data = S(1) / (S(1) + (-x.data).exp());
    if (train) cached_out = y;
    return y;
  }
  Tensor<S> backward(const Tensor<S>& gy) {
    Tensor<S> gx = gy;
    gx.data = gy.data * cached_out.data * (S(1) - cached_out.data);
    return gx;
  }
};

// ---------------------------------------------------------------------------
// Inverted dropout; the mask is drawn from an engine owned by the model so a
// training step's randomness is part of its checkpointed state.
template <typename S>
struct Dropout {
  S rate = S(0.5);
  std::mt19937_64* rng = nullptr;
  Vec<S> mask;

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    if (!train || rate <= S(0)) return x;
    const S keep = S(1) - rate;
    mask = Vec<S>::Zero(x.size());
    for (Eigen::Index i = 0; i < mask.size(); ++i) {
      const double u = static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
      mask[i] = u < static_cast<double>(keep) ? S(1) / keep : S(0);
    }
    Tensor<S> y = x;
    y.data = x.data * mask;
    return y;
  }
  Tensor<S> backward(const Tensor<S>& gy) {
    Tensor<S> gx = gy;
    gx.data = gy.data * mask;
    return gx;
  }
};

}  // namespace gazekit::nn
