#include <doctest.h>

#include <set>

#include "gazekit/dataset.hpp"
#include "gazekit/errors.hpp"
#include "gazekit/eval/text_metrics.hpp"
#include "gazekit/fixation.hpp"
#include "gazekit/glyph_atlas.hpp"
#include "gazekit/lexicon.hpp"
#include "gazekit/newspaper.hpp"
#include "gazekit/png_io.hpp"
#include "gazekit/text_page.hpp"
#include "testutil.hpp"

using namespace gazekit;
using testutil::TempDir;

namespace {

TextPageSpec one_word_spec(const std::string& word) {
  TextPageSpec spec;
  spec.words.assign(15, "");
  spec.words[0] = word;
  return spec;
}

int green_box_width(const ImageF& page) {
  int first = -1, last = -1;
  for (int x = 0; x < page.width; ++x)
    if ((page.channels[1].col(x) > 0.f).any()) {
      if (first < 0) first = x;
      last = x;
    }
  return first < 0 ? 0 : last - first + 1;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("atlas covers letters and space with exact cell size") {
  const GlyphAtlas& atlas = builtin_atlas();
  CHECK(atlas.glyph_width_px == 8);
  CHECK(atlas.glyph_height_px == 12);
  CHECK(atlas.advance_px() == 8);

  std::string chars = " ";
  for (char c = 'a'; c <= 'z'; ++c) chars += c;
  for (char c = 'A'; c <= 'Z'; ++c) chars += c;
  for (char c : chars) {
    REQUIRE(atlas.has(c));
    const GlyphBitmap& b = atlas.bitmap(c);
    CHECK(b.rows() == 12);
    CHECK(b.cols() == 8);
  }
  CHECK((atlas.bitmap(' ') == 0).all());
}

TEST_CASE("atlas letters ink their edge columns and keep gaps narrow") {
  // First/last column ink makes word widths exactly chars * advance; interior
  // blank runs under 3 keep word segmentation from splitting inside a glyph.
  const GlyphAtlas& atlas = builtin_atlas();
  for (const auto& [c, bitmap] : atlas.bitmaps) {
    if (c == ' ') continue;
    CAPTURE(c);
    CHECK((bitmap.col(0) != 0).any());
    CHECK((bitmap.col(bitmap.cols() - 1) != 0).any());
    int blank_run = 0;
    for (int x = 0; x < bitmap.cols(); ++x) {
      blank_run = (bitmap.col(x) != 0).any() ? 0 : blank_run + 1;
      CHECK(blank_run <= 2);
    }
  }
}

TEST_CASE("lexicon is atlas-renderable with modal length 3") {
  const auto& words = lexicon();
  CHECK(words.size() == 100);
  const GlyphAtlas& atlas = builtin_atlas();
  std::map<int, int> by_len;
  for (const auto& w : words) {
    ++by_len[static_cast<int>(w.size())];
    for (char c : w) CHECK(atlas.has(c));
  }
  int modal = -1, best = 0;
  for (const auto& [len, count] : by_len)
    if (count > best) modal = len, best = count;
  CHECK(modal == 3);
  CHECK(lexicon_modal_length() == 3);
}

TEST_CASE("rendered word 'cat' spans exactly 24 green columns") {
  ImageF page = render_text_page(one_word_spec("cat"), builtin_atlas());
  CHECK(green_box_width(page) == 24);
}

TEST_CASE("empty words leave the green channel blank") {
  TextPageSpec spec;
  spec.words.assign(15, "");
  ImageF page = render_text_page(spec, builtin_atlas());
  CHECK((page.channels[1] == 0.f).all());
  CHECK((page.channels[0] == 255.f).all());
  CHECK((page.channels[2] == 0.f).all());
}

TEST_CASE("text pages keep red constant and blue empty") {
  TextPageSpec spec;
  for (int i = 0; i < 15; ++i) spec.words.push_back(lexicon()[i * 3]);
  ImageF page = render_text_page(spec, builtin_atlas());
  CHECK((page.channels[0] == 255.f).all());
  CHECK((page.channels[2] == 0.f).all());
  CHECK((page.channels[1] > 0.f).any());
  ImageF again = render_text_page(spec, builtin_atlas());
  CHECK(testutil::images_equal(page, again));
}

TEST_CASE("layout rejects overflowing rows and unknown characters") {
  TextPageSpec spec;
  spec.words.assign(15, "seventy");  // 5 * (7*8) + gaps > 256 - margins
  CHECK_THROWS_AS(layout_words(spec, builtin_atlas()), DataError);
  CHECK_THROWS_AS(layout_words(one_word_spec("nope!"), builtin_atlas()), DataError);
  TextPageSpec wrong_count;
  wrong_count.words.assign(14, "a");
  CHECK_THROWS_AS(layout_words(wrong_count, builtin_atlas()), DataError);
}

TEST_CASE("to_display inverts glyph pixels") {
  ImageF page = render_text_page(one_word_spec("dog"), builtin_atlas());
  ImageF display = to_display(page);
  REQUIRE(display.channel_count() == 1);
  for (int y = 0; y < page.height; ++y)
    for (int x = 0; x < page.width; ++x) {
      const bool glyph = page.at(1, y, x) > 0.f;
      CHECK(display.at(0, y, x) == (glyph ? 0.f : 255.f));
    }
  // Both forms segment identically.
  RowGeometry geo;
  CHECK(segment_words(binarize_text(page), geo) == segment_words(binarize_text(display), geo));
}

TEST_CASE("glyph rows stay inside their page-third bands") {
  for (int page_h : {256, 64}) {
    const auto tops = text_row_tops(page_h, 3, 12);
    REQUIRE(tops.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(tops[i] >= page_h * i / 3);
      CHECK(tops[i] + 12 <= page_h * (i + 1) / 3);
    }
  }
}

TEST_CASE("sampled layouts satisfy hard geometric invariants") {
  LayoutConstraints c;  // defaults
  int pictures = 0, texts = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    NewspaperLayout layout = sample_newspaper_layout(seed, c);
    REQUIRE(static_cast<int>(layout.regions.size()) >= c.min_regions);
    REQUIRE(static_cast<int>(layout.regions.size()) <= c.max_regions);
    bool any_pic = false, any_text = false;
    for (size_t i = 0; i < layout.regions.size(); ++i) {
      const Region& r = layout.regions[i];
      REQUIRE(r.x >= 0);
      REQUIRE(r.y >= 0);
      REQUIRE(r.x + r.w <= layout.page_w);
      REQUIRE(r.y + r.h <= layout.page_h);
      REQUIRE(r.w >= c.min_w);
      REQUIRE(r.w <= c.max_w);
      REQUIRE(r.h >= c.min_h);
      REQUIRE(r.h <= c.max_h);
      (r.kind == RegionKind::Picture ? any_pic : any_text) = true;
      for (size_t j = i + 1; j < layout.regions.size(); ++j)
        REQUIRE(!r.intersects(layout.regions[j]));
    }
    REQUIRE(any_pic);
    REQUIRE(any_text);
    pictures += any_pic;
    texts += any_text;
  }
  CHECK(pictures == 1000);
  CHECK(texts == 1000);
}

TEST_CASE("layout sampling is deterministic per seed") {
  LayoutConstraints c;
  NewspaperLayout a = sample_newspaper_layout(42, c);
  NewspaperLayout b = sample_newspaper_layout(42, c);
  REQUIRE(a.regions.size() == b.regions.size());
  for (size_t i = 0; i < a.regions.size(); ++i) {
    CHECK(a.regions[i].x == b.regions[i].x);
    CHECK(a.regions[i].y == b.regions[i].y);
    CHECK(a.regions[i].w == b.regions[i].w);
    CHECK(a.regions[i].h == b.regions[i].h);
    CHECK(a.regions[i].kind == b.regions[i].kind);
  }
}

TEST_CASE("forced single full-page region fills the usable area") {
  LayoutConstraints c;
  c.min_regions = c.max_regions = 1;
  c.min_w = c.max_w = 256 - 8;  // page minus margins
  c.min_h = c.max_h = 256 - 8;
  c.require_both_kinds = false;
  NewspaperLayout layout = sample_newspaper_layout(3, c);
  REQUIRE(layout.regions.size() == 1);
  CHECK(layout.regions[0].w == 248);
  CHECK(layout.regions[0].h == 248);
}

TEST_CASE("validate_layout rejects overlap and out-of-bounds regions") {
  NewspaperLayout layout;
  layout.regions.push_back({10, 10, 50, 50, RegionKind::Text});
  layout.regions.push_back({30, 30, 50, 50, RegionKind::Picture});
  CHECK_THROWS_AS(validate_layout(layout), DataError);
  layout.regions.pop_back();
  layout.regions.push_back({240, 240, 50, 50, RegionKind::Picture});
  CHECK_THROWS_AS(validate_layout(layout), DataError);
}

TEST_CASE("segmented pages use exactly the three-color palette") {
  NewspaperLayout empty;
  ImageF white = render_segmented(empty);
  CHECK((white.channels[0] == 255.f).all());
  CHECK((white.channels[1] == 255.f).all());
  CHECK((white.channels[2] == 255.f).all());

  NewspaperLayout one;
  one.regions.push_back({20, 30, 10, 10, RegionKind::Picture});
  ImageF seg = render_segmented(one);
  int red_pixels = 0;
  for (int y = 0; y < seg.height; ++y)
    for (int x = 0; x < seg.width; ++x)
      red_pixels += seg.at(0, y, x) == 255.f && seg.at(1, y, x) == 0.f && seg.at(2, y, x) == 0.f;
  CHECK(red_pixels == 100);

  LayoutConstraints c;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ImageF page = render_segmented(sample_newspaper_layout(seed, c));
    for (int y = 0; y < page.height; ++y)
      for (int x = 0; x < page.width; ++x) {
        const float r = page.at(0, y, x), g = page.at(1, y, x), b = page.at(2, y, x);
        const bool bg = r == 255.f && g == 255.f && b == 255.f;
        const bool text = r == 0.f && g == 0.f && b == 255.f;
        const bool pic = r == 255.f && g == 0.f && b == 0.f;
        REQUIRE((bg || text || pic));
      }
  }
}

TEST_CASE("detailed pages texture regions and keep the background white") {
  NewspaperLayout empty;
  ImageF blank = render_detailed(empty, builtin_atlas(), 1);
  CHECK((blank.channels[0] == 255.f).all());
  CHECK((blank.channels[1] == 255.f).all());
  CHECK((blank.channels[2] == 255.f).all());

  NewspaperLayout layout;
  layout.regions.push_back({16, 16, 120, 12, RegionKind::Text});
  layout.regions.push_back({16, 120, 80, 60, RegionKind::Picture});
  ImageF page = render_detailed(layout, builtin_atlas(), 7);
  ImageF again = render_detailed(layout, builtin_atlas(), 7);
  CHECK(testutil::images_equal(page, again));

  auto inside = [&](int y, int x, const Region& r) {
    return x >= r.x && x < r.x + r.w && y >= r.y && y < r.y + r.h;
  };
  int inked_rows_min = 1 << 20, inked_rows_max = -1;
  for (int y = 0; y < page.height; ++y)
    for (int x = 0; x < page.width; ++x) {
      const bool in_any = inside(y, x, layout.regions[0]) || inside(y, x, layout.regions[1]);
      const bool white =
          page.at(0, y, x) == 255.f && page.at(1, y, x) == 255.f && page.at(2, y, x) == 255.f;
      if (!in_any) {
        REQUIRE(white);
      } else if (inside(y, x, layout.regions[0]) && !white) {
        inked_rows_min = std::min(inked_rows_min, y);
        inked_rows_max = std::max(inked_rows_max, y);
      }
    }
  // Height-12 text region holds exactly one glyph row.
  CHECK(inked_rows_max - inked_rows_min + 1 <= 12);
  CHECK(inked_rows_max >= 0);
}

TEST_CASE("text corpus generation is deterministic and self-consistent") {
  TempDir tmp;
  Manifest m = gen_text_corpus(tmp.sub("a"), 4, 99, builtin_atlas());
  CHECK(m.kind == "text");
  CHECK(m.item_ids.size() == 4);
  CHECK(m.item_ids[0] == "0000");
  CHECK(m.generator_seed == 99);
  CHECK_FALSE(m.has_render_params());

  Manifest reloaded = load_manifest(tmp.sub("a"));
  CHECK(reloaded.item_ids == m.item_ids);
  CHECK(reloaded.page_w == 256);

  for (const auto& id : m.item_ids) {
    ImageF page = load_item_image(tmp.sub("a"), "text", id);
    CHECK(page.width == 256);
    CHECK((page.channels[2] == 0.f).all());
    TrialRecord trial = load_trial(tmp.sub("a") + "/fixations/" + id + ".json");
    CHECK(trial.page_id == id);
    CHECK(!trial.fixations.empty());
    validate_trial(trial);
    for (const auto& f : trial.fixations) CHECK(f.word_index.has_value());
  }

  gen_text_corpus(tmp.sub("b"), 4, 99, builtin_atlas());
  CHECK(testutil::trees_equal(tmp.sub("a"), tmp.sub("b")));
  gen_text_corpus(tmp.sub("c"), 4, 100, builtin_atlas());
  CHECK_FALSE(testutil::trees_equal(tmp.sub("a"), tmp.sub("c")));

  CHECK_THROWS_AS(gen_text_corpus(tmp.sub("d"), 0, 1, builtin_atlas()), ConfigError);
}

TEST_CASE("small text pages honor custom row geometry") {
  TempDir tmp;
  Manifest m = gen_text_corpus(tmp.str(), 2, 5, builtin_atlas(), 64, 64, 3, 1);
  CHECK(m.page_w == 64);
  for (const auto& id : m.item_ids) {
    ImageF page = load_item_image(tmp.str(), "text", id);
    auto lengths = segment_words(binarize_text(page), RowGeometry{3, 3});
    CHECK(lengths.size() == 3);
    for (int len : lengths) CHECK(len % 8 == 0);
  }
}

TEST_CASE("newspaper corpus writes paired seg and detail pages") {
  TempDir tmp;
  Manifest m = gen_newspaper_corpus(tmp.sub("a"), 3, 17, builtin_atlas(), 64, 64);
  CHECK(m.kind == "newspaper");
  CHECK(m.item_ids.size() == 3);
  for (const auto& id : m.item_ids) {
    ImageF seg = load_item_image(tmp.sub("a"), "seg", id);
    ImageF detail = load_item_image(tmp.sub("a"), "detail", id);
    CHECK(seg.width == 64);
    CHECK(detail.width == 64);
  }
  gen_newspaper_corpus(tmp.sub("b"), 3, 17, builtin_atlas(), 64, 64);
  CHECK(testutil::trees_equal(tmp.sub("a"), tmp.sub("b")));
}

TEST_CASE("split_dataset partitions 10 items into 8 train / 2 test") {
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back(item_name(i));
  auto [train, test] = split_dataset(ids, 0.2, 7);
  CHECK(train.size() == 8);
  CHECK(test.size() == 2);

  auto [train2, test2] = split_dataset(ids, 0.2, 7);
  CHECK(train == train2);
  CHECK(test == test2);

  std::set<std::string> all(train.begin(), train.end());
  all.insert(test.begin(), test.end());
  CHECK(all.size() == 10);

  CHECK_THROWS_AS(split_dataset(ids, 0.0, 7), ConfigError);
  CHECK_THROWS_AS(split_dataset(ids, 1.0, 7), ConfigError);
  CHECK_THROWS_AS(split_dataset({}, 0.2, 7), ConfigError);
}

TEST_CASE("manifest json round-trips and rejects foreign documents") {
  Manifest m;
  m.kind = "newspaper";
  m.item_ids = {"0000", "0001"};
  m.page_w = 64;
  m.page_h = 64;
  m.generator_seed = 1234567890123ULL;
  m.saliency_provider = "heuristic";
  m.render_sigma_px = 2.5;
  Manifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.kind == m.kind);
  CHECK(back.item_ids == m.item_ids);
  CHECK(back.page_w == 64);
  CHECK(back.generator_seed == m.generator_seed);
  CHECK(back.saliency_provider == "heuristic");
  CHECK(back.render_sigma_px == 2.5);

  CHECK_THROWS_AS(manifest_from_json("{"), DataError);
  CHECK_THROWS_AS(manifest_from_json("{}"), DataError);
  CHECK_THROWS_AS(manifest_from_json(R"({"format_version":1,"kind":"comic","item_ids":[],
    "page_size":{"width":1,"height":1},"palette":{},"atlas_metrics":{},"generator_seed":0})"),
                  DataError);
}

TEST_CASE("item ids are zero-padded to four digits") {
  CHECK(item_name(0) == "0000");
  CHECK(item_name(42) == "0042");
  CHECK(item_name(9999) == "9999");
}

TEST_CASE("png io round-trips quantized images atomically") {
  TempDir tmp;
  ImageF img = testutil::random_image(33, 21, 3, 5);
  write_png(tmp.sub("x.png"), img);
  PngReadResult r = read_png(tmp.sub("x.png"));
  CHECK_FALSE(r.was_grayscale);
  REQUIRE(same_shape(r.image, img));
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        REQUIRE(r.image.at(c, y, x) ==
                static_cast<float>(quantize_u8(img.at(c, y, x))));

  ImageF gray(16, 16, 1, 128.f);
  write_png(tmp.sub("g.png"), gray);
  PngReadResult g = read_png(tmp.sub("g.png"));
  CHECK(g.was_grayscale);
  CHECK(g.image.channel_count() == 1);
  CHECK((g.image.channels[0] == 128.f).all());

  CHECK_THROWS_AS(read_png(tmp.sub("missing.png")), IoError);
}

}  // TEST_SUITE
