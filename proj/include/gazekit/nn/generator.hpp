#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "gazekit/nn/layers.hpp"

namespace gazekit::nn {

struct GeneratorSpec {
  int in_channels = 1;  // 1 for heatmap input, 3 for concatenated input
  int out_channels = 3;
  int depth = 8;  // encoder/decoder level count; 2^depth must divide the side
  int base_filters = 64;
  float dropout_rate = 0.5f;
};

// U-shaped encoder/decoder. Level i halves the spatial side on the way down
// and doubles it on the way up; each encoder level's input is forwarded to
// the matching decoder level (innermost directly, the rest by channel
// concatenation), one pairing per level.
template <typename S>
class UnetGenerator {
 public:
  explicit UnetGenerator(const GeneratorSpec& spec) : spec_(spec) {
    if (spec.depth < 1) throw ConfigError("generator: depth must be >= 1");
    if (spec.out_channels != 3) throw ConfigError("generator: out_channels must be 3");
    const int d = spec.depth;
    enc_ch_.resize(d);
    for (int i = 0; i < d; ++i) enc_ch_[i] = spec.base_filters * std::min(1 << i, 8);

    downs_.resize(d);
    ups_.resize(d);
    for (int i = 0; i < d; ++i) {
      const int in = i == 0 ? spec.in_channels : enc_ch_[i - 1];
      auto& down = downs_[i];
      down.pre_act = i != 0;
      down.use_bn = i != 0 && i != d - 1;
      down.conv = Conv2d<S>(in, enc_ch_[i], 4, 2, 1, /*bias=*/!down.use_bn);
      if (down.use_bn) down.bn = BatchNorm2d<S>(enc_ch_[i]);
    }
    // Dropout sits on the inner decoder levels just above the bottleneck.
    const int drop_lo = std::max(1, d - 4), drop_hi = d - 2;
    for (int i = d - 1; i >= 0; --i) {
      const int in = i == d - 1 ? enc_ch_[d - 1] : 2 * enc_ch_[i];
      const int out = i == 0 ? spec.out_channels : enc_ch_[i - 1];
      auto& up = ups_[i];
      up.use_bn = i != 0;
      up.use_tanh = i == 0;
      up.use_dropout = spec.dropout_rate > 0 && i >= drop_lo && i <= drop_hi;
      up.deconv = ConvTranspose2d<S>(in, out, 4, 2, 1, /*bias=*/!up.use_bn);
      if (up.use_bn) up.bn = BatchNorm2d<S>(out);
      up.drop.rate = S(spec.dropout_rate);
      up.drop.rng = &dropout_rng_;
    }

    for (int i = 0; i < d; ++i) downs_[i].conv.collect("g.down" + std::to_string(i), params_);
    for (int i = 0; i < d; ++i)
      if (downs_[i].use_bn) downs_[i].bn.collect("g.down" + std::to_string(i) + ".bn", params_);
    for (int i = 0; i < d; ++i) ups_[i].deconv.collect("g.up" + std::to_string(i), params_);
    for (int i = 0; i < d; ++i)
      if (ups_[i].use_bn) ups_[i].bn.collect("g.up" + std::to_string(i) + ".bn", params_);
  }

  const GeneratorSpec& spec() const { return spec_; }
  int skip_count() const { return spec_.depth; }
  std::vector<Param<S>*>& params() { return params_; }
  std::mt19937_64& dropout_rng() { return dropout_rng_; }

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    if (x.c != spec_.in_channels)
      throw ConfigError("generator: input has " + std::to_string(x.c) +
                        " channels, expected " + std::to_string(spec_.in_channels));
    const int stride_total = 1 << spec_.depth;
    if (x.h % stride_total != 0 || x.w % stride_total != 0)
      throw ConfigError("generator: image side " + std::to_string(x.h) + "x" +
                        std::to_string(x.w) + " not divisible by 2^depth = " +
                        std::to_string(stride_total));
    const int d = spec_.depth;
    acts_.assign(d + 1, Tensor<S>());
    acts_[0] = x;
    for (int i = 0; i < d; ++i) acts_[i + 1] = downs_[i].forward(acts_[i], train);

    Tensor<S> u = ups_[d - 1].forward(acts_[d], train);
    for (int i = d - 2; i >= 0; --i) u = ups_[i].forward(concat_channels(acts_[i + 1], u), train);
    return u;
  }

  // Gradient of the loss w.r.t. the forward input; parameter grads accumulate.
  Tensor<S> backward(const Tensor<S>& gy) {
    const int d = spec_.depth;
    std::vector<Tensor<S>> skip_grads(d + 1);

    Tensor<S> g = gy;
    for (int i = 0; i <= d - 2; ++i) {
      g = ups_[i].backward(g);  // grad w.r.t. concat(acts_[i+1], up_{i+1} out)
      Tensor<S> gu;
      split_channels(g, acts_[i + 1].c, skip_grads[i + 1], gu);
      g = std::move(gu);
    }
    g = ups_[d - 1].backward(g);  // grad w.r.t. acts_[d]

    for (int i = d - 1; i >= 0; --i) {
      if (skip_grads[i + 1].size() > 0) g.data += skip_grads[i + 1].data;
      g = downs_[i].backward(g);
    }
    return g;
  }

 private:
  struct Down {
    bool pre_act = false, use_bn = false;
    LeakyReLU<S> act;
    Conv2d<S> conv;
    BatchNorm2d<S> bn;

    Tensor<S> forward(const Tensor<S>& x, bool train) {
      Tensor<S> t = pre_act ? act.forward(x, train) : x;
      t = conv.forward(t, train);
      if (use_bn) t = bn.forward(t, train);
      return t;
    }
    Tensor<S> backward(const Tensor<S>& gy) {
      Tensor<S> g = use_bn ? bn.backward(gy) : gy;
      g = conv.backward(g);
      if (pre_act) g = act.backward(g);
      return g;
    }
  };

  struct Up {
    bool use_bn = false, use_dropout = false, use_tanh = false;
    ReLU<S> act;
    ConvTranspose2d<S> deconv;
    BatchNorm2d<S> bn;
    Dropout<S> drop;
    Tanh<S> tanh;

    Tensor<S> forward(const Tensor<S>& x, bool train) {
      Tensor<S> t = act.forward(x, train);
      t = deconv.forward(t, train);
      if (use_bn) t = bn.forward(t, train);
      if (use_dropout) t = drop.forward(t, train);
      if (use_tanh) t = tanh.forward(t, train);
      return t;
    }
    Tensor<S> backward(const Tensor<S>& gy) {
      Tensor<S> g = use_tanh ? tanh.backward(gy) : gy;
      if (use_dropout) g = drop.backward(g);
      if (use_bn) g = bn.backward(g);
      g = deconv.backward(g);
      return act.backward(g);
    }
  };

  GeneratorSpec spec_;
  std::vector<int> enc_ch_;
  std::vector<Down> downs_;
  std::vector<Up> ups_;
  std::vector<Tensor<S>> acts_;
  std::vector<Param<S>*> params_;
  std::mt19937_64 dropout_rng_{0x9e3779b9ULL};
};

}  // namespace gazekit::nn
