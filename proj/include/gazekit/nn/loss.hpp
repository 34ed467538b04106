#pragma once

#include <cmath>

#include "gazekit/nn/tensor.hpp"

namespace gazekit::nn {

inline constexpr double kLossEps = 1e-7;

struct LossWeights {
  double lambda_l1 = 0.01;
};

namespace detail {
template <typename S>
Vec<S> clamp_score(const Vec<S>& s) {
  return s.max(S(kLossEps)).min(S(1) - S(kLossEps));
}
}  // namespace detail

// Discriminator objective in minimization form:
//   mean(-log d_real) + mean(-log(1 - d_fake)).
// Scores at exactly 0 or 1 are clamped by epsilon before the log.
template <typename S>
S d_loss(const Tensor<S>& d_real, const Tensor<S>& d_fake) {
  if (!d_real.same_shape(d_fake))
    throw ContractError("d_loss: score shape mismatch " + d_real.shape_str() + " vs " +
                        d_fake.shape_str());
  const Vec<S> r = detail::clamp_score(d_real.data);
  const Vec<S> f = detail::clamp_score(d_fake.data);
  return (-r.log()).mean() + (-(S(1) - f).log()).mean();
}

// d(d_loss)/d(scores); pass-through at the clamp. The real and fake terms are
// independent, so each grad can be taken while that pass' caches are live.
template <typename S>
Tensor<S> d_loss_real_grad(const Tensor<S>& d_real) {
  Tensor<S> g = d_real;
  g.data = -S(1) / (S(d_real.size()) * detail::clamp_score(d_real.data));
  return g;
}

template <typename S>
Tensor<S> d_loss_fake_grad(const Tensor<S>& d_fake) {
  Tensor<S> g = d_fake;
  g.data = S(1) / (S(d_fake.size()) * (S(1) - detail::clamp_score(d_fake.data)));
  return g;
}

template <typename S>
void d_loss_grads(const Tensor<S>& d_real, const Tensor<S>& d_fake, Tensor<S>& g_real,
                  Tensor<S>& g_fake) {
  g_real = d_loss_real_grad(d_real);
  g_fake = d_loss_fake_grad(d_fake);
}

// Adversarial generator term: mean(-log d_fake).
template <typename S>
S g_adv_loss(const Tensor<S>& d_fake) {
  return (-detail::clamp_score(d_fake.data).log()).mean();
}

template <typename S>
Tensor<S> g_adv_loss_grad(const Tensor<S>& d_fake) {
  Tensor<S> g = d_fake;
  g.data = -S(1) / (S(d_fake.size()) * detail::clamp_score(d_fake.data));
  return g;
}

// Mean absolute difference, in whatever units the tensors carry.
template <typename S>
S l1_loss(const Tensor<S>& output, const Tensor<S>& target) {
  if (!output.same_shape(target))
    throw ContractError("l1_loss: shape mismatch " + output.shape_str() + " vs " +
                        target.shape_str());
  return (output.data - target.data).abs().mean();
}

template <typename S>
Tensor<S> l1_loss_grad(const Tensor<S>& output, const Tensor<S>& target) {
  Tensor<S> g = output;
  g.data = (output.data - target.data).sign() / S(output.size());
  return g;
}

// Full generator objective: mean(-log d_fake) + lambda_l1 * L1(output, target).
template <typename S>
S g_loss(const Tensor<S>& d_fake, const Tensor<S>& output, const Tensor<S>& target,
         const LossWeights& weights) {
  return g_adv_loss(d_fake) + S(weights.lambda_l1) * l1_loss(output, target);
}

}  // namespace gazekit::nn
