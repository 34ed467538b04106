#include "gazekit/eval/text_metrics.hpp"

#include <algorithm>
#include <cstdlib>

#include "gazekit/errors.hpp"
#include "gazekit/text_page.hpp"

namespace gazekit {

namespace {

// One detected run of occupied columns inside a row band.
struct Segment {
  int band = 0;
  int x_first = 0;
  int x_last = 0;

  int length() const { return x_last - x_first + 1; }
};

// Column-occupancy runs within each band, gaps shorter than gap_min bridged.
// Bands top to bottom, runs left to right, so the order is reading order.
std::vector<Segment> find_segments(const TextMask& mask, const RowGeometry& geometry) {
  if (geometry.bands < 1) throw ContractError("segment_words: bands must be >= 1");
  if (geometry.gap_min < 1) throw ContractError("segment_words: gap_min must be >= 1");
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());

  std::vector<Segment> segments;
  for (int b = 0; b < geometry.bands; ++b) {
    const int y0 = h * b / geometry.bands;
    const int y1 = (b + 1 == geometry.bands) ? h : h * (b + 1) / geometry.bands;

    int first = -1, last = -1;
    auto flush = [&] {
      if (first >= 0) segments.push_back({b, first, last});
      first = -1;
    };
    for (int x = 0; x < w; ++x) {
      const bool occupied = mask.block(y0, x, y1 - y0, 1).any();
      if (!occupied) continue;
      if (first >= 0 && x - last > geometry.gap_min) flush();
      if (first < 0) first = x;
      last = x;
    }
    flush();
  }
  return segments;
}

}  // namespace

TextMask binarize_text(const ImageF& image) {
  if (image.channel_count() == 1)  // display form: dark pixels are text
    return image.channels[0] < 128.f;
  if (image.channel_count() != 3)
    throw ContractError("binarize_text: expected 1 or 3 channels");
  // Encoded pages keep blue at zero; display pages are bright everywhere but
  // the glyphs, so even mostly-white pages carry a high blue mean.
  const float blue_mean = image.channels[2].mean();
  if (blue_mean < 32.f) return image.channels[1] > 127.f;
  return luma(image) < 128.f;
}

std::vector<int> segment_words(const TextMask& mask, const RowGeometry& geometry) {
  std::vector<int> lengths;
  for (const Segment& s : find_segments(mask, geometry)) lengths.push_back(s.length());
  return lengths;
}

int SegmentHistogram::modal_bin() const {
  int best_len = -1, best_count = 0;
  for (const auto& [len, count] : bins)  // ascending keys: ties keep the smallest
    if (count > best_count) best_len = len, best_count = count;
  return best_len;
}

SegmentHistogram histogram(const std::vector<int>& lengths) {
  SegmentHistogram h;
  for (int len : lengths) ++h.bins[len];
  return h;
}

double compare_histograms(const SegmentHistogram& h1, const SegmentHistogram& h2) {
  const int n1 = h1.total(), n2 = h2.total();
  if (n1 == 0 || n2 == 0)
    throw DataError("compare_histograms: divergence undefined for an empty histogram");
  double tv = 0.0;
  auto it1 = h1.bins.begin();
  auto it2 = h2.bins.begin();
  while (it1 != h1.bins.end() || it2 != h2.bins.end()) {
    double p1 = 0.0, p2 = 0.0;
    if (it2 == h2.bins.end() || (it1 != h1.bins.end() && it1->first < it2->first)) {
      p1 = static_cast<double>(it1->second) / n1;
      ++it1;
    } else if (it1 == h1.bins.end() || it2->first < it1->first) {
      p2 = static_cast<double>(it2->second) / n2;
      ++it2;
    } else {
      p1 = static_cast<double>(it1->second) / n1;
      p2 = static_cast<double>(it2->second) / n2;
      ++it1, ++it2;
    }
    tv += std::abs(p1 - p2);
  }
  return 0.5 * tv;
}

GlyphReport recognize_glyphs(const ImageF& image, const GlyphAtlas& atlas,
                             const RowGeometry& geometry) {
  const TextMask mask = binarize_text(image);
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  const int gw = atlas.glyph_width_px;
  const int gh = atlas.glyph_height_px;
  const int adv = atlas.advance_px();

  // Cells anchor at each band's nominal glyph-row top — the renderer's own
  // placement rule. A segment's ink bounds cannot serve: words without
  // ascenders or descenders ink a shorter box and would shift the templates.
  const std::vector<int> row_tops = text_row_tops(h, geometry.bands, gh);

  GlyphReport report;
  for (const Segment& s : find_segments(mask, geometry)) {
    const int top = row_tops[s.band];
    const int cells = (s.length() + adv - 1) / adv;
    for (int cell = 0; cell < cells; ++cell) {
      const int x0 = s.x_first + cell * adv;
      GlyphBitmap got = GlyphBitmap::Zero(gh, gw);
      for (int y = 0; y < gh; ++y)
        for (int x = 0; x < gw; ++x) {
          const int py = top + y, px = x0 + x;
          if (py < h && px < w && px <= s.x_last && mask(py, px)) got(y, x) = 1;
        }

      // Space is excluded: a glyph slot inside a segment always carries ink.
      int best_dist = gw * gh + 1;
      char best_char = '?';
      for (const auto& [c, bitmap] : atlas.bitmaps) {
        if (c == ' ') continue;
        const int dist = static_cast<int>((got != bitmap).count());
        if (dist < best_dist) best_dist = dist, best_char = c;
      }

      ++report.total_chars;
      if (best_dist * 4 > gw * gh)  // invalid beyond 25% of cell area
        ++report.invalid_chars;
      else
        ++report.recognized[best_char];
    }
  }
  return report;
}

}  // namespace gazekit
