#include "gazekit/text_page.hpp"

#include <stdexcept>

namespace gazekit {

std::vector<int> text_row_tops(int page_h, int rows, int glyph_height_px) {
  std::vector<int> tops(rows);
  for (int i = 0; i < rows; ++i)
    tops[i] = (2 * i + 1) * page_h / (2 * rows) - glyph_height_px / 2;
  return tops;
}

std::vector<WordBox> layout_words(const TextPageSpec& spec, const GlyphAtlas& atlas) {
  const int expected = spec.rows * spec.words_per_row;
  if (static_cast<int>(spec.words.size()) != expected)
    throw DataError("layout_words: expected " + std::to_string(expected) + " words, got " +
                    std::to_string(spec.words.size()));

  const int adv = atlas.advance_px();
  const auto tops = text_row_tops(spec.page_h, spec.rows, atlas.glyph_height_px);
  std::vector<WordBox> boxes;
  boxes.reserve(spec.words.size());

  for (int r = 0; r < spec.rows; ++r) {
    int x = kTextMarginPx;
    for (int k = 0; k < spec.words_per_row; ++k) {
      const std::string& word = spec.words[r * spec.words_per_row + k];
      for (char c : word)
        if (!atlas.has(c))
          throw DataError(std::string("layout_words: atlas has no glyph for '") + c + "'");
      const int w = static_cast<int>(word.size()) * adv;
      if (x + w > spec.page_w)
        throw DataError("layout_words: row " + std::to_string(r) + " overflows page width at word '" +
                        word + "'");
      boxes.push_back({r, x, tops[r], w, atlas.glyph_height_px});
      x += w + adv;  // one space advance between words
    }
  }
  return boxes;
}

ImageF render_text_page(const TextPageSpec& spec, const GlyphAtlas& atlas) {
  const auto boxes = layout_words(spec, atlas);
  ImageF img(spec.page_w, spec.page_h, 3, 0.f);
  img.channels[0].setConstant(spec.background_red);

  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const WordBox& box = boxes[i];
    const std::string& word = spec.words[i];
    for (std::size_t ci = 0; ci < word.size(); ++ci) {
      const GlyphBitmap& bm = atlas.bitmap(word[ci]);
      const int gx = box.x + static_cast<int>(ci) * atlas.advance_px();
      for (int y = 0; y < atlas.glyph_height_px; ++y)
        for (int x = 0; x < atlas.glyph_width_px; ++x)
          if (bm(y, x)) img.at(1, box.y + y, gx + x) = 255.f;
    }
  }
  return img;
}

ImageF to_display(const ImageF& text_page) {
  if (text_page.channel_count() != 3)
    throw ContractError("to_display: expected a 3-channel text page");
  ImageF out(text_page.width, text_page.height, 1);
  out.channels[0] = (text_page.channels[1] > 127.f).select(
      Plane<float>::Zero(text_page.height, text_page.width),
      Plane<float>::Constant(text_page.height, text_page.width, 255.f));
  return out;
}

}  // namespace gazekit
