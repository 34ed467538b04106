#pragma once

#include <map>
#include <vector>

#include "gazekit/glyph_atlas.hpp"
#include "gazekit/image.hpp"

namespace gazekit {

using TextMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;  // (h, w)

// Text-pixel mask. Encoded pages (text carried in green over a constant-red
// background) use green > 127; display-form pages use luma < 128. The mode is
// auto-detected from blue-channel emptiness: encoded pages keep blue near
// zero, while display pages are bright in all channels.
TextMask binarize_text(const ImageF& image);

// Horizontal text bands (equal slices of the page height) plus the blank-gap
// threshold separating words: gaps of gap_min or more columns split segments,
// shorter gaps bridge (intra-glyph gaps are at most 2 px, the inter-word
// space advance is 8).
struct RowGeometry {
  int bands = 3;
  int gap_min = 3;
};

// Pixel widths of word-like runs, band by band in reading order.
std::vector<int> segment_words(const TextMask& mask, const RowGeometry& geometry);

struct SegmentHistogram {
  std::map<int, int> bins;  // 1-px bins: length -> count

  int total() const {
    int t = 0;
    for (const auto& [len, count] : bins) t += count;
    return t;
  }
  // Smallest length attaining the maximal count; -1 when empty.
  int modal_bin() const;
};

SegmentHistogram histogram(const std::vector<int>& lengths);

// Total-variation distance between the normalized histograms, in [0, 1].
// Throws DataError when either histogram is empty.
double compare_histograms(const SegmentHistogram& h1, const SegmentHistogram& h2);

struct GlyphReport {
  int total_chars = 0;
  int invalid_chars = 0;
  std::map<char, int> recognized;  // per-character match counts

  double validity() const {
    return total_chars == 0 ? 1.0
                            : 1.0 - static_cast<double>(invalid_chars) / total_chars;
  }
};

// Slices every segment into monospace cells and matches each cell against the
// atlas letters by Hamming distance; a cell whose best distance exceeds 25%
// of the cell area counts as invalid.
GlyphReport recognize_glyphs(const ImageF& image, const GlyphAtlas& atlas,
                             const RowGeometry& geometry);

}  // namespace gazekit
