#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gazekit/eval/text_metrics.hpp"

namespace gazekit {

// Dataset-level evaluation summary. Text metrics (histogram, divergence,
// glyph counts) apply to text pages only; has_text_metrics gates them.
struct EvalReport {
  double ssim_mean = 0.0;
  std::vector<std::pair<std::string, double>> ssim_per_item;  // item id -> score

  bool has_text_metrics = false;
  SegmentHistogram generated_histogram;
  double tv_distance = 0.0;
  GlyphReport glyph;
};

// JSON form: {ssim_mean, ssim_per_item, histogram: {length: count},
// tv_distance, glyph: {total, invalid}} — the text-metric keys are null for
// image-only evaluations.
std::string eval_report_to_json(const EvalReport& report);

}  // namespace gazekit
