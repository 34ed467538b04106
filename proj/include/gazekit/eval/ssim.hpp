#pragma once

#include "gazekit/image.hpp"

namespace gazekit {

struct SsimConfig {
  int window = 8;  // square sliding window, stride 1
  int stride = 1;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
};

// Mean windowed structural similarity over luma; RGB inputs are converted
// first. Symmetric in its arguments, bounded in [-1, 1]; throws ContractError
// on shape mismatch or when the window does not fit.
double ssim(const ImageF& a, const ImageF& b, const SsimConfig& config = {});

}  // namespace gazekit
