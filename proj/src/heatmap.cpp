#include "gazekit/heatmap.hpp"

#include <cmath>
#include <map>

#include "gazekit/errors.hpp"

namespace gazekit {

double fixation_intensity(double duration_pct) {
  if (duration_pct < 0) throw DataError("fixation_intensity: negative duration percentage");
  constexpr double kCapPct = 0.17;
  return 255.0 * (std::min(duration_pct, kCapPct) / kCapPct);
}

Heatmap render_heatmap(const TrialRecord& trial, int page_w, int page_h, double sigma) {
  if (page_w <= 0 || page_h <= 0 || sigma <= 0)
    throw ConfigError("render_heatmap: page size and sigma must be positive");
  validate_trial(trial);

  Heatmap map;
  map.kernel_sigma_px = static_cast<float>(sigma);
  map.intensities = Plane<float>::Zero(page_h, page_w);

  // Per-word totals; positional fixations keep their own percentage.
  std::map<int, double> word_total;
  for (const auto& f : trial.fixations)
    if (f.word_index) word_total[*f.word_index] += f.duration_pct;

  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);

  for (std::size_t i = 0; i < trial.fixations.size(); ++i) {
    const auto& f = trial.fixations[i];
    if (f.x_px < 0 || f.x_px >= page_w || f.y_px < 0 || f.y_px >= page_h)
      throw DataError("render_heatmap: fixation " + std::to_string(i) + " out of bounds at (" +
                      std::to_string(f.x_px) + ", " + std::to_string(f.y_px) + ")");
    const double pct = f.word_index ? word_total[*f.word_index] : f.duration_pct;
    const double peak = fixation_intensity(pct);

    const int cx = static_cast<int>(std::lround(f.x_px));
    const int cy = static_cast<int>(std::lround(f.y_px));
    for (int y = std::max(0, cy - radius); y <= std::min(page_h - 1, cy + radius); ++y)
      for (int x = std::max(0, cx - radius); x <= std::min(page_w - 1, cx + radius); ++x) {
        const double dx = x - f.x_px, dy = y - f.y_px;
        const float v = static_cast<float>(peak * std::exp(-(dx * dx + dy * dy) * inv_two_sigma2));
        map.intensities(y, x) = std::max(map.intensities(y, x), v);
      }
  }
  return map;
}

ImageF heatmap_to_image(const Heatmap& map) {
  ImageF img(map.width(), map.height(), 1);
  img.channels[0] = map.intensities;
  return img;
}

Heatmap heatmap_from_image(const ImageF& img, float sigma) {
  if (img.channel_count() != 1) throw ContractError("heatmap_from_image: expected 1 channel");
  Heatmap map;
  map.kernel_sigma_px = sigma;
  map.intensities = img.channels[0];
  return map;
}

}  // namespace gazekit
