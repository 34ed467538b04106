#pragma once

#include <string>
#include <vector>

#include "gazekit/glyph_atlas.hpp"
#include "gazekit/image.hpp"

namespace gazekit {

// A 15-word page: 3 rows of 5 words each. The text is carried by the green
// channel over a constant red background; blue stays zero.
struct TextPageSpec {
  std::vector<std::string> words;  // exactly rows * words_per_row entries
  int page_w = 256;
  int page_h = 256;
  int rows = 3;
  int words_per_row = 5;
  float background_red = 255.f;
};

struct WordBox {
  int row = 0;    // 0-based row index
  int x = 0;      // left edge, px
  int y = 0;      // top edge, px
  int width = 0;  // chars * advance
  int height = 0;
};

// Left margin for word placement; one space advance separates words.
inline constexpr int kTextMarginPx = 8;

// Top of the glyph row for each text band (bands are equal thirds of the page).
std::vector<int> text_row_tops(int page_h, int rows, int glyph_height_px);

// Computes per-word boxes; throws DataError on row overflow or unknown chars.
std::vector<WordBox> layout_words(const TextPageSpec& spec, const GlyphAtlas& atlas);

ImageF render_text_page(const TextPageSpec& spec, const GlyphAtlas& atlas);

// Black-on-white single-channel view of an encoded text page.
ImageF to_display(const ImageF& text_page);

}  // namespace gazekit
