#pragma once

#include <map>
#include <string>
#include <vector>

#include "gazekit/nn/param.hpp"

namespace gazekit::nn {

// RMSProp: sq <- alpha*sq + (1-alpha)*g^2; p <- p - lr * g / (sqrt(sq) + eps).
// Square-average accumulators start at zero and are checkpointed by name.
template <typename S>
class RmsProp {
 public:
  RmsProp(S lr, S alpha, S momentum, S eps) : lr_(lr), alpha_(alpha), momentum_(momentum), eps_(eps) {}

  void step(const std::vector<Param<S>*>& params) {
    for (auto* p : params) {
      if (!p->trainable()) continue;
      Vec<S>& sq = sq_avg_[p->name];
      if (sq.size() != p->value.size()) sq = Vec<S>::Zero(p->value.size());
      sq = alpha_ * sq + (S(1) - alpha_) * p->grad.square();
      const Vec<S> update = p->grad / (sq.sqrt() + eps_);
      if (momentum_ > S(0)) {
        Vec<S>& buf = momentum_buf_[p->name];
        if (buf.size() != p->value.size()) buf = Vec<S>::Zero(p->value.size());
        buf = momentum_ * buf + update;
        p->value -= lr_ * buf;
      } else {
        p->value -= lr_ * update;
      }
    }
  }

  // Exposed for checkpointing.
  std::map<std::string, Vec<S>>& sq_avg() { return sq_avg_; }
  std::map<std::string, Vec<S>>& momentum_buf() { return momentum_buf_; }

 private:
  S lr_, alpha_, momentum_, eps_;
  std::map<std::string, Vec<S>> sq_avg_;
  std::map<std::string, Vec<S>> momentum_buf_;
};

}  // namespace gazekit::nn
