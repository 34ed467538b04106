#include "gazekit/eval/ssim.hpp"

namespace gazekit {

namespace {

// Inclusive-rectangle sums via an (H+1, W+1) integral image.
Plane<double> integral(const Plane<double>& p) {
  const Eigen::Index h = p.rows(), w = p.cols();
  Plane<double> s = Plane<double>::Zero(h + 1, w + 1);
  for (Eigen::Index y = 0; y < h; ++y) {
    double row = 0;
    for (Eigen::Index x = 0; x < w; ++x) {
      row += p(y, x);
      s(y + 1, x + 1) = s(y, x + 1) + row;
    }
  }
  return s;
}

double window_sum(const Plane<double>& s, int y, int x, int k) {
  return s(y + k, x + k) - s(y, x + k) - s(y + k, x) + s(y, x);
}

}  // namespace

double ssim(const ImageF& a, const ImageF& b, const SsimConfig& config) {
  if (!same_shape(a, b))
    throw ContractError("ssim: shape mismatch " + std::to_string(a.width) + "x" +
                        std::to_string(a.height) + "x" + std::to_string(a.channel_count()) +
                        " vs " + std::to_string(b.width) + "x" + std::to_string(b.height) +
                        "x" + std::to_string(b.channel_count()));
  const int k = config.window;
  if (a.height < k || a.width < k)
    throw ContractError("ssim: " + std::to_string(k) + "x" + std::to_string(k) +
                        " window does not fit in " + std::to_string(a.width) + "x" +
                        std::to_string(a.height) + " image");

  const Plane<double> la = luma(a).cast<double>();
  const Plane<double> lb = luma(b).cast<double>();
  const Plane<double> sa = integral(la);
  const Plane<double> sb = integral(lb);
  const Plane<double> saa = integral((la * la).eval());
  const Plane<double> sbb = integral((lb * lb).eval());
  const Plane<double> sab = integral((la * lb).eval());

  const double c1 = config.c1(), c2 = config.c2();
  const double n = static_cast<double>(k) * k;
  double total = 0;
  long count = 0;
  for (int y = 0; y + k <= a.height; y += config.stride)
    for (int x = 0; x + k <= a.width; x += config.stride) {
      const double mu_a = window_sum(sa, y, x, k) / n;
      const double mu_b = window_sum(sb, y, x, k) / n;
      const double var_a = window_sum(saa, y, x, k) / n - mu_a * mu_a;
      const double var_b = window_sum(sbb, y, x, k) / n - mu_b * mu_b;
      const double cov = window_sum(sab, y, x, k) / n - mu_a * mu_b;
      const double score = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
                           ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      total += score;
      ++count;
    }
  return total / static_cast<double>(count);
}

}  // namespace gazekit
