#pragma once

#include <memory>
#include <string>

#include "gazekit/heatmap.hpp"
#include "gazekit/image.hpp"

namespace gazekit {

// Deterministic saliency for pages without real gaze data: picture regions
// score high, text lines carry medium line-aligned blobs, everything is
// weighted by a centered Gaussian prior and normalized to peak 255.
Heatmap heuristic_saliency(const ImageF& page);

// 8-bit grayscale PNG of matching size, values widened to real unchanged.
Heatmap load_precomputed_saliency(const std::string& path, int page_w, int page_h);

struct SaliencySource {
  virtual ~SaliencySource() = default;
  // `page` is the rendered page the map is for; `item_id` names the dataset item.
  virtual Heatmap saliency_for(const ImageF& page, const std::string& item_id) = 0;
};

std::unique_ptr<SaliencySource> make_heuristic_source();
// Reads <dir>/<item_id>.png per item.
std::unique_ptr<SaliencySource> make_precomputed_source(std::string dir, int page_w, int page_h);

}  // namespace gazekit
