#pragma once

#include <Eigen/Dense>

#include "gazekit/fixation.hpp"
#include "gazekit/image.hpp"

namespace gazekit {

struct Heatmap {
  Plane<float> intensities;  // (h, w), values in [0, 255]
  float kernel_sigma_px = 2.f;

  int width() const { return static_cast<int>(intensities.cols()); }
  int height() const { return static_cast<int>(intensities.rows()); }
};

// 255 * min(pct, 0.17) / 0.17: linear below the 0.17% cap, clamped above.
double fixation_intensity(double duration_pct);

// Each fixation stamps a Gaussian blob (std dev sigma) whose peak is the
// intensity of its effective percentage; fixations that share a word_index
// all use that word's total percentage. Blobs combine per pixel by maximum.
Heatmap render_heatmap(const TrialRecord& trial, int page_w, int page_h, double sigma = 2.0);

ImageF heatmap_to_image(const Heatmap& map);
Heatmap heatmap_from_image(const ImageF& img, float sigma = 2.f);

}  // namespace gazekit
