#include "gazekit/glyph_atlas.hpp"

#include <cstring>

namespace gazekit {

namespace {

struct GlyphDef {
  char c;
  const char* rows[12];
};

// 8x12 cell, '#' = ink. Baseline at row 9, descenders in rows 10-11.
const GlyphDef kGlyphs[] = {
    {'a',
     {"........", "........", "........", "........", ".######.", "......##", ".#######",
      "##....##", "##....##", ".#######", "........", "........"}},
    {'b',
     {"##......", "##......", "##......", "##......", "#######.", "##....##", "##....##",
      "##....##", "##....##", "#######.", "........", "........"}},
    {'c',
     {"........", "........", "........", "........", ".######.", "##....##", "##......",
      "##......", "##....##", ".######.", "........", "........"}},
    {'d',
     {"......##", "......##", "......##", "......##", ".#######", "##....##", "##....##",
      "##....##", "##....##", ".#######", "........", "........"}},
    {'e',
     {"........", "........", "........", "........", ".######.", "##....##", "########",
      "##......", "##....##", ".######.", "........", "........"}},
    {'f',
     {"...####.", "..##..##", "..##....", "..##....", "########", "..##....", "..##....",
      "..##....", "..##....", "..##....", "........", "........"}},
    {'g',
     {"........", "........", "........", "........", ".#######", "##....##", "##....##",
      "##....##", "##....##", ".#######", "......##", ".######."}},
    {'h',
     {"##......", "##......", "##......", "##......", "#######.", "##....##", "##....##",
      "##....##", "##....##", "##....##", "........", "........"}},
    {'i',
     {"...##...", "...##...", "........", "........", "...##...", "...##...", "...##...",
      "...##...", "...##...", "########", "........", "........"}},
    {'j',
     {"......##", "......##", "........", "........", ".....###", "......##", "......##",
      "......##", "......##", "......##", "##....##", ".######."}},
    {'k',
     {"##......", "##......", "##......", "##......", "##....##", "##...##.", "##..##..",
      "#####...", "##..##..", "##...###", "........", "........"}},
    {'l',
     {"...##...", "...##...", "...##...", "...##...", "...##...", "...##...", "...##...",
      "...##...", "...##...", "########", "........", "........"}},
    {'m',
     {"........", "........", "........", "........", "#######.", "##.##.##", "##.##.##",
      "##.##.##", "##.##.##", "##.##.##", "........", "........"}},
    {'n',
     {"........", "........", "........", "........", "#######.", "##....##", "##....##",
      "##....##", "##....##", "##....##", "........", "........"}},
    {'o',
     {"........", "........", "........", "........", ".######.", "##....##", "##....##",
      "##....##", "##....##", ".######.", "........", "........"}},
    {'p',
     {"........", "........", "........", "........", "#######.", "##....##", "##....##",
      "##....##", "##....##", "#######.", "##......", "##......"}},
    {'q',
     {"........", "........", "........", "........", ".#######", "##....##", "##....##",
      "##....##", "##....##", ".#######", "......##", "......##"}},
    {'r',
     {"........", "........", "........", "........", "##.####.", "###...##", "##......",
      "##......", "##......", "##......", "........", "........"}},
    {'s',
     {"........", "........", "........", "........", ".#######", "##......", ".#####..",
      "....###.", "......##", "#######.", "........", "........"}},
    {'t',
     {"..##....", "..##....", "..##....", "..##....", "########", "..##....", "..##....",
      "..##....", "..##..##", "...####.", "........", "........"}},
    {'u',
     {"........", "........", "........", "........", "##....##", "##....##", "##....##",
      "##....##", "##....##", ".#######", "........", "........"}},
    {'v',
     {"........", "........", "........", "........", "##....##", "##....##", ".##..##.",
      ".##..##.", "..####..", "...##...", "........", "........"}},
    {'w',
     {"........", "........", "........", "........", "##....##", "##.##.##", "##.##.##",
      "##.##.##", "########", ".##..##.", "........", "........"}},
    {'x',
     {"........", "........", "........", "........", "##....##", ".##..##.", "..####..",
      "..####..", ".##..##.", "##....##", "........", "........"}},
    {'y',
     {"........", "........", "........", "........", "##....##", "##....##", "##....##",
      "##....##", "##....##", ".#######", "......##", ".######."}},
    {'z',
     {"........", "........", "........", "........", "########", ".....##.", "....##..",
      "..###...", ".##.....", "########", "........", "........"}},
    {'A',
     {"..####..", ".##..##.", "##....##", "##....##", "########", "##....##", "##....##",
      "##....##", "##....##", "##....##", "........", "........"}},
    {'B',
     {"#######.", "##....##", "##....##", "##....##", "#######.", "##....##", "##....##",
      "##....##", "##....##", "#######.", "........", "........"}},
    {'C',
     {".######.", "##....##", "##......", "##......", "##......", "##......", "##......",
      "##......", "##....##", ".######.", "........", "........"}},
    {'D',
     {"######..", "##...##.", "##....##", "##....##", "##....##", "##....##", "##....##",
      "##....##", "##...##.", "######..", "........", "........"}},
    {'E',
     {"########", "##......", "##......", "##......", "######..", "##......", "##......",
      "##......", "##......", "########", "........", "........"}},
    {'F',
     {"########", "##......", "##......", "##......", "######..", "##......", "##......",
      "##......", "##......", "##......", "........", "........"}},
    {'G',
     {".######.", "##....##", "##......", "##......", "##......", "##..####", "##....##",
      "##....##", "##....##", ".######.", "........", "........"}},
    {'H',
     {"##....##", "##....##", "##....##", "##....##", "########", "##....##", "##....##",
      "##....##", "##....##", "##....##", "........", "........"}},
    {'I',
     {"########", "...##...", "...##...", "...##...", "...##...", "...##...", "...##...",
      "...##...", "...##...", "########", "........", "........"}},
    {'J',
     {"########", ".....##.", ".....##.", ".....##.", ".....##.", ".....##.", ".....##.",
      "##...##.", "##...##.", ".#####..", "........", "........"}},
    {'K',
     {"##....##", "##...##.", "##..##..", "##.##...", "####....", "####....", "##.##...",
      "##..##..", "##...##.", "##....##", "........", "........"}},
    {'L',
     {"##......", "##......", "##......", "##......", "##......", "##......", "##......",
      "##......", "##......", "########", "........", "........"}},
    {'M',
     {"##....##", "###..###", "########", "##.##.##", "##.##.##", "##....##", "##....##",
      "##....##", "##....##", "##....##", "........", "........"}},
    {'N',
     {"##....##", "###...##", "####..##", "##.##.##", "##.##.##", "##..####", "##...###",
      "##....##", "##....##", "##....##", "........", "........"}},
    {'O',
     {".######.", "##....##", "##....##", "##....##", "##....##", "##....##", "##....##",
      "##....##", "##....##", ".######.", "........", "........"}},
    {'P',
     {"#######.", "##....##", "##....##", "##....##", "#######.", "##......", "##......",
      "##......", "##......", "##......", "........", "........"}},
    {'Q',
     {".######.", "##....##", "##....##", "##....##", "##....##", "##....##", "##.##.##",
      "##..####", "##...##.", ".####.##", "........", "........"}},
    {'R',
     {"#######.", "##....##", "##....##", "##....##", "#######.", "####....", "##.##...",
      "##..##..", "##...##.", "##....##", "........", "........"}},
    {'S',
     {".######.", "##....##", "##......", "###.....", ".#####..", "....####", "......##",
      "......##", "##....##", ".######.", "........", "........"}},
    {'T',
     {"########", "...##...", "...##...", "...##...", "...##...", "...##...", "...##...",
      "...##...", "...##...", "...##...", "........", "........"}},
    {'U',
     {"##....##", "##....##", "##....##", "##....##", "##....##", "##....##", "##....##",
      "##....##", "##....##", ".######.", "........", "........"}},
    {'V',
     {"##....##", "##....##", "##....##", "##....##", "##....##", "##....##", ".##..##.",
      ".##..##.", "..####..", "...##...", "........", "........"}},
    {'W',
     {"##....##", "##....##", "##....##", "##....##", "##.##.##", "##.##.##", "##.##.##",
      "########", "###..###", "##....##", "........", "........"}},
    {'X',
     {"##....##", "##....##", ".##..##.", "..####..", "...##...", "...##...", "..####..",
      ".##..##.", "##....##", "##....##", "........", "........"}},
    {'Y',
     {"##....##", "##....##", ".##..##.", "..####..", "...##...", "...##...", "...##...",
      "...##...", "...##...", "...##...", "........", "........"}},
    {'Z',
     {"########", "......##", ".....##.", "....##..", "...##...", "..##....", ".##.....",
      "##......", "##......", "########", "........", "........"}},
};

GlyphAtlas build_atlas() {
  GlyphAtlas atlas;
  atlas.glyph_width_px = 8;
  atlas.glyph_height_px = 12;
  for (const auto& def : kGlyphs) {
    GlyphBitmap bm(12, 8);
    for (int y = 0; y < 12; ++y) {
      if (std::strlen(def.rows[y]) != 8)
        throw ContractError(std::string("atlas: bad row width for '") + def.c + "'");
      for (int x = 0; x < 8; ++x) bm(y, x) = def.rows[y][x] == '#' ? 1 : 0;
    }
    atlas.bitmaps[def.c] = std::move(bm);
  }
  atlas.bitmaps[' '] = GlyphBitmap::Zero(12, 8);
  return atlas;
}

}  // namespace

const GlyphAtlas& builtin_atlas() {
  static const GlyphAtlas atlas = build_atlas();
  return atlas;
}

}  // namespace gazekit
