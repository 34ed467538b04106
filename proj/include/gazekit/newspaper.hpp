#pragma once

#include <cstdint>
#include <vector>

#include "gazekit/glyph_atlas.hpp"
#include "gazekit/image.hpp"

namespace gazekit {

enum class RegionKind { Text, Picture };

struct Region {
  int x = 0, y = 0, w = 0, h = 0;
  RegionKind kind = RegionKind::Text;

  bool intersects(const Region& o) const {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
};

struct NewspaperLayout {
  int page_w = 256;
  int page_h = 256;
  std::vector<Region> regions;
};

struct LayoutConstraints {
  int min_regions = 4;
  int max_regions = 9;
  int min_w = 24, max_w = 200;
  int min_h = 24, max_h = 140;
  // Generated corpus pages always carry both kinds; degenerate constraint
  // sets (e.g. a single full-page region) may switch this off.
  bool require_both_kinds = true;
};

// Throws DataError if the layout violates bounds or regions overlap.
void validate_layout(const NewspaperLayout& layout);

// Column-stacked placement: non-overlapping by construction, deterministic
// per seed. Throws ConfigError after bounded retries on infeasible constraints.
NewspaperLayout sample_newspaper_layout(std::uint64_t seed, const LayoutConstraints& constraints,
                                        int page_w = 256, int page_h = 256);

ImageF render_segmented(const NewspaperLayout& layout);

ImageF render_detailed(const NewspaperLayout& layout, const GlyphAtlas& atlas, std::uint64_t seed);

}  // namespace gazekit
