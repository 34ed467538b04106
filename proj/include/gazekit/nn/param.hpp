#pragma once

#include <string>
#include <vector>

#include "gazekit/nn/tensor.hpp"

namespace gazekit::nn {

// Buffers (batch-norm running stats) travel with the parameters for
// checkpointing but receive no gradients and no optimizer updates.
enum class ParamKind { ConvWeight, ConvBias, BnGamma, BnBeta, Buffer };

template <typename S>
struct Param {
  std::string name;
  ParamKind kind = ParamKind::ConvWeight;
  Vec<S> value;
  Vec<S> grad;

  void resize(Eigen::Index count) {
    value = Vec<S>::Zero(count);
    grad = Vec<S>::Zero(count);
  }

  bool trainable() const { return kind != ParamKind::Buffer; }
};

template <typename S>
void zero_grads(const std::vector<Param<S>*>& params) {
  for (auto* p : params)
    if (p->trainable()) p->grad.setZero();
}

}  // namespace gazekit::nn
