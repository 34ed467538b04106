#pragma once

#include <random>
#include <vector>

#include "gazekit/nn/param.hpp"

namespace gazekit::nn {

inline constexpr double kInitRange = 0.05;

// Convolution kernels and biases draw from Uniform(-0.05, 0.05); batch-norm
// affine parameters start at the identity (gamma 1, beta 0) so normalized
// activations pass through unscaled. Buffers are left at their defaults.
template <typename S>
void init_weights(const std::vector<Param<S>*>& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto* p : params) {
    switch (p->kind) {
      case ParamKind::ConvWeight:
      case ParamKind::ConvBias:
        for (Eigen::Index i = 0; i < p->value.size(); ++i) {
          const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          p->value[i] = static_cast<S>(-kInitRange + 2 * kInitRange * u);
        }
        break;
      case ParamKind::BnGamma:
        p->value.setOnes();
        break;
      case ParamKind::BnBeta:
        p->value.setZero();
        break;
      case ParamKind::Buffer:
        break;
    }
    if (p->trainable()) p->grad.setZero();
  }
}

}  // namespace gazekit::nn
