#pragma once

#include <Eigen/Dense>
#include <map>

#include "gazekit/errors.hpp"

namespace gazekit {

using GlyphBitmap = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;  // (h, w), 0/1

// Monospace bitmap font over a-z, A-Z and space. Every letter inks its first
// and last column, so a rendered word spans exactly chars * advance pixels.
struct GlyphAtlas {
  int glyph_width_px = 8;
  int glyph_height_px = 12;
  std::map<char, GlyphBitmap> bitmaps;

  int advance_px() const { return glyph_width_px; }

  const GlyphBitmap& bitmap(char c) const {
    auto it = bitmaps.find(c);
    if (it == bitmaps.end())
      throw DataError(std::string("atlas: no glyph for character '") + c + "'");
    return it->second;
  }

  bool has(char c) const { return bitmaps.count(c) != 0; }
};

// The built-in 8x12 atlas used by the synthetic corpus.
const GlyphAtlas& builtin_atlas();

}  // namespace gazekit
