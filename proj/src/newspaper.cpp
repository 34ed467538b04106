#include "gazekit/newspaper.hpp"

#include <algorithm>
#include <iostream>
#include <random>

#include "gazekit/lexicon.hpp"

namespace gazekit {

namespace {

constexpr int kMargin = 4;
constexpr int kGutter = 4;

int rand_in(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Bilinear value noise on an 8 px lattice, range [0, 1].
struct ValueNoise {
  int lattice = 8;
  std::vector<float> grid;
  int gw = 0, gh = 0;

  ValueNoise(int w, int h, std::mt19937_64& rng) {
    gw = w / lattice + 2;
    gh = h / lattice + 2;
    grid.resize(static_cast<std::size_t>(gw) * gh);
    std::uniform_real_distribution<float> u(0.f, 1.f);
    for (auto& v : grid) v = u(rng);
  }

  float operator()(int x, int y) const {
    const float fx = static_cast<float>(x) / lattice;
    const float fy = static_cast<float>(y) / lattice;
    const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
    const float tx = fx - ix, ty = fy - iy;
    auto g = [&](int gx, int gy) { return grid[static_cast<std::size_t>(gy) * gw + gx]; };
    const float a = g(ix, iy) * (1 - tx) + g(ix + 1, iy) * tx;
    const float b = g(ix, iy + 1) * (1 - tx) + g(ix + 1, iy + 1) * tx;
    return a * (1 - ty) + b * ty;
  }
};

}  // namespace

void validate_layout(const NewspaperLayout& layout) {
  for (std::size_t i = 0; i < layout.regions.size(); ++i) {
    const Region& r = layout.regions[i];
    if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0 || r.x + r.w > layout.page_w ||
        r.y + r.h > layout.page_h)
      throw DataError("layout: region " + std::to_string(i) + " out of page bounds");
    for (std::size_t j = i + 1; j < layout.regions.size(); ++j)
      if (r.intersects(layout.regions[j]))
        throw DataError("layout: regions " + std::to_string(i) + " and " + std::to_string(j) +
                        " overlap");
  }
}

NewspaperLayout sample_newspaper_layout(std::uint64_t seed, const LayoutConstraints& c,
                                        int page_w, int page_h) {
  if (c.min_regions < 1 || c.max_regions < c.min_regions || c.min_w > c.max_w ||
      c.min_h > c.max_h)
    throw ConfigError("sample_newspaper_layout: inconsistent constraints");
  if (c.min_w > page_w - 2 * kMargin || c.min_h > page_h - 2 * kMargin)
    throw ConfigError("sample_newspaper_layout: minimum region size exceeds page");

  std::mt19937_64 rng(seed);
  const int usable_w = page_w - 2 * kMargin;

  for (int attempt = 0; attempt < 100; ++attempt) {
    NewspaperLayout layout;
    layout.page_w = page_w;
    layout.page_h = page_h;

    const int max_cols = std::max(1, std::min(3, (usable_w + kGutter) / (c.min_w + kGutter)));
    const int cols = rand_in(rng, 1, max_cols);
    const int col_w = (usable_w - (cols - 1) * kGutter) / cols;
    const int target = rand_in(rng, c.min_regions, c.max_regions);

    for (int col = 0; col < cols && static_cast<int>(layout.regions.size()) < target; ++col) {
      const int col_x = kMargin + col * (col_w + kGutter);
      int y = kMargin;
      while (static_cast<int>(layout.regions.size()) < target &&
             y + c.min_h <= page_h - kMargin) {
        Region r;
        r.h = rand_in(rng, c.min_h, std::min(c.max_h, page_h - kMargin - y));
        r.w = rand_in(rng, c.min_w, std::min(c.max_w, col_w));
        r.x = col_x + (col_w > r.w ? rand_in(rng, 0, col_w - r.w) : 0);
        r.y = y;
        r.kind = std::uniform_real_distribution<double>(0, 1)(rng) < 0.35 ? RegionKind::Picture
                                                                          : RegionKind::Text;
        layout.regions.push_back(r);
        y += r.h + rand_in(rng, 2, 10);
      }
    }

    if (static_cast<int>(layout.regions.size()) < c.min_regions) continue;

    if (c.require_both_kinds && layout.regions.size() >= 2) {
      auto count = [&](RegionKind k) {
        return std::count_if(layout.regions.begin(), layout.regions.end(),
                             [&](const Region& r) { return r.kind == k; });
      };
      if (count(RegionKind::Picture) == 0) layout.regions.front().kind = RegionKind::Picture;
      if (count(RegionKind::Text) == 0) layout.regions.back().kind = RegionKind::Text;
    } else if (c.require_both_kinds && layout.regions.size() < 2) {
      continue;
    }

    validate_layout(layout);
    return layout;
  }
  throw ConfigError("sample_newspaper_layout: constraints infeasible after bounded retries");
}

ImageF render_segmented(const NewspaperLayout& layout) {
  ImageF img(layout.page_w, layout.page_h, 3, 255.f);
  for (const Region& r : layout.regions) {
    const Rgb color = r.kind == RegionKind::Text ? kPaletteText : kPalettePicture;
    img.channels[0].block(r.y, r.x, r.h, r.w).setConstant(color.r);
    img.channels[1].block(r.y, r.x, r.h, r.w).setConstant(color.g);
    img.channels[2].block(r.y, r.x, r.h, r.w).setConstant(color.b);
  }
  return img;
}

ImageF render_detailed(const NewspaperLayout& layout, const GlyphAtlas& atlas,
                       std::uint64_t seed) {
  ImageF img(layout.page_w, layout.page_h, 3, 255.f);
  std::mt19937_64 rng(seed);

  for (std::size_t ri = 0; ri < layout.regions.size(); ++ri) {
    const Region& r = layout.regions[ri];
    if (r.kind == RegionKind::Picture) {
      // Seeded texture kept inside [48, 240] so no pixel reads as pure
      // white background or pure black text.
      ValueNoise noise(r.w, r.h, rng);
      std::uniform_real_distribution<float> tint_d(-32.f, 32.f);
      const float tr = tint_d(rng), tg = tint_d(rng), tb = tint_d(rng);
      for (int y = 0; y < r.h; ++y)
        for (int x = 0; x < r.w; ++x) {
          const float base = 80.f + 128.f * noise(x, y);
          img.at(0, r.y + y, r.x + x) = std::clamp(base + tr, 48.f, 240.f);
          img.at(1, r.y + y, r.x + x) = std::clamp(base + tg, 48.f, 240.f);
          img.at(2, r.y + y, r.x + x) = std::clamp(base + tb, 48.f, 240.f);
        }
    } else {
      const int gh = atlas.glyph_height_px;
      const int adv = atlas.advance_px();
      const int rows = r.h / gh;
      if (rows == 0) {
        std::cerr << "render_detailed: text region " << ri << " shorter than one glyph row, left blank\n";
        continue;
      }
      for (int row = 0; row < rows; ++row) {
        const int ty = r.y + row * gh;
        int x = r.x;
        while (true) {
          const std::string word = sample_word(rng);
          const int w = static_cast<int>(word.size()) * adv;
          if (x + w > r.x + r.w) break;
          for (std::size_t ci = 0; ci < word.size(); ++ci) {
            const GlyphBitmap& bm = atlas.bitmap(word[ci]);
            for (int gy = 0; gy < gh; ++gy)
              for (int gx = 0; gx < atlas.glyph_width_px; ++gx)
                if (bm(gy, gx)) {
                  img.at(0, ty + gy, x + static_cast<int>(ci) * adv + gx) = 0.f;
                  img.at(1, ty + gy, x + static_cast<int>(ci) * adv + gx) = 0.f;
                  img.at(2, ty + gy, x + static_cast<int>(ci) * adv + gx) = 0.f;
                }
          }
          x += w + adv;
        }
      }
    }
  }
  return img;
}

}  // namespace gazekit
