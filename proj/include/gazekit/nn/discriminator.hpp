#pragma once

#include <algorithm>
#include <vector>

#include "gazekit/nn/layers.hpp"

namespace gazekit::nn {

struct DiscriminatorSpec {
  int in_channels = 4;  // condition channels + image channels
  int layers = 3;       // stride-2 stages
  int base_filters = 64;
};

// Patch classifier: a stack of stride-2 convolutions, one stride-1 widening
// stage, and a 1-channel head squashed to (0,1). Each output cell scores one
// receptive-field patch of the input (30x30 cells for 256 input at 3 layers).
template <typename S>
class PatchDiscriminator {
 public:
  explicit PatchDiscriminator(const DiscriminatorSpec& spec) : spec_(spec) {
    if (spec.layers < 1) throw ConfigError("discriminator: layers must be >= 1");
    const int b = spec.base_filters;
    int prev = spec.in_channels;
    for (int l = 0; l < spec.layers; ++l) {
      const int cur = b * std::min(1 << l, 8);
      Stage st;
      st.use_bn = l != 0;
      st.conv = Conv2d<S>(prev, cur, 4, 2, 1, /*bias=*/!st.use_bn);
      if (st.use_bn) st.bn = BatchNorm2d<S>(cur);
      stages_.push_back(std::move(st));
      prev = cur;
    }
    {
      const int cur = b * std::min(1 << spec.layers, 8);
      Stage st;
      st.use_bn = true;
      st.conv = Conv2d<S>(prev, cur, 4, 1, 1, /*bias=*/false);
      st.bn = BatchNorm2d<S>(cur);
      stages_.push_back(std::move(st));
      prev = cur;
    }
    head_ = Conv2d<S>(prev, 1, 4, 1, 1, /*bias=*/true);

    for (std::size_t i = 0; i < stages_.size(); ++i) {
      stages_[i].conv.collect("d.stage" + std::to_string(i), params_);
      if (stages_[i].use_bn)
        stages_[i].bn.collect("d.stage" + std::to_string(i) + ".bn", params_);
    }
    head_.collect("d.head", params_);
  }

  const DiscriminatorSpec& spec() const { return spec_; }
  std::vector<Param<S>*>& params() { return params_; }

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    if (x.c != spec_.in_channels)
      throw ConfigError("discriminator: input has " + std::to_string(x.c) +
                        " channels, expected " + std::to_string(spec_.in_channels));
    Tensor<S> t = x;
    for (auto& st : stages_) t = st.forward(t, train);
    t = head_.forward(t, train);
    return sigmoid_.forward(t, train);
  }

  Tensor<S> backward(const Tensor<S>& gy) {
    Tensor<S> g = sigmoid_.backward(gy);
    g = head_.backward(g);
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) g = it->backward(g);
    return g;
  }

 private:
  struct Stage {
    bool use_bn = false;
    Conv2d<S> conv;
    BatchNorm2d<S> bn;
    LeakyReLU<S> act;

    Tensor<S> forward(const Tensor<S>& x, bool train) {
      Tensor<S> t = conv.forward(x, train);
      if (use_bn) t = bn.forward(t, train);
      return act.forward(t, train);
    }
    Tensor<S> backward(const Tensor<S>& gy) {
      Tensor<S> g = act.backward(gy);
      if (use_bn) g = bn.backward(g);
      return conv.backward(g);
    }
  };

  DiscriminatorSpec spec_;
  std::vector<Stage> stages_;
  Conv2d<S> head_;
  Sigmoid<S> sigmoid_;
  std::vector<Param<S>*> params_;
};

}  // namespace gazekit::nn
