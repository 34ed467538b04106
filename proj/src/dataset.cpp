#include "gazekit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "gazekit/errors.hpp"
#include "gazekit/fixation.hpp"
#include "gazekit/lexicon.hpp"
#include "gazekit/newspaper.hpp"
#include "gazekit/png_io.hpp"
#include "gazekit/text_page.hpp"

namespace fs = std::filesystem;

namespace gazekit {

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out << content;
  }
  fs::rename(tmp, path);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

// Samples a word set whose rows fit the page at the atlas advance width.
std::vector<std::string> sample_page_words(std::mt19937_64& rng, const GlyphAtlas& atlas,
                                           int page_w, int rows, int words_per_row) {
  const int adv = atlas.advance_px();
  const int budget = page_w - 2 * kTextMarginPx;
  std::vector<std::string> words;
  for (int r = 0; r < rows; ++r) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw ConfigError("gen_text_corpus: cannot fit " + std::to_string(words_per_row) +
                          " words into " + std::to_string(page_w) + " px rows");
      std::vector<std::string> row;
      int width = -adv;  // first word adds no space
      for (int k = 0; k < words_per_row; ++k) {
        row.push_back(sample_word(rng));
        width += adv + static_cast<int>(row.back().size()) * adv;
      }
      if (width <= budget) {
        words.insert(words.end(), row.begin(), row.end());
        break;
      }
    }
  }
  return words;
}

// Synthetic reading trial: most words get one or two fixations inside their
// box; per-word totals stay near the intensity cap so heat peaks vary.
TrialRecord synth_trial(std::mt19937_64& rng, const std::string& page_id,
                        const std::vector<WordBox>& boxes) {
  TrialRecord trial;
  trial.page_id = page_id;
  for (std::size_t w = 0; w < boxes.size(); ++w) {
    if (uniform(rng, 0, 1) < 0.1) continue;  // skipped word
    const int count = uniform(rng, 0, 1) < 0.25 ? 2 : 1;
    const double word_pct = uniform(rng, 0.02, 0.22);
    for (int k = 0; k < count; ++k) {
      FixationRecord f;
      f.x_px = boxes[w].x + uniform(rng, 0.15, 0.85) * boxes[w].width;
      f.y_px = boxes[w].y + uniform(rng, 0.3, 0.7) * boxes[w].height;
      f.word_index = static_cast<int>(w);
      f.duration_pct = word_pct / count;
      trial.fixations.push_back(f);
    }
  }
  if (trial.fixations.empty() && !boxes.empty()) {
    FixationRecord f;
    f.x_px = boxes[0].x + 0.5 * boxes[0].width;
    f.y_px = boxes[0].y + 0.5 * boxes[0].height;
    f.word_index = 0;
    f.duration_pct = 0.1;
    trial.fixations.push_back(f);
  }
  return trial;
}

LayoutConstraints constraints_for_page(int page_w, int page_h) {
  LayoutConstraints c;
  if (std::min(page_w, page_h) < 128) {
    c.min_regions = 2;
    c.max_regions = 4;
    c.min_w = 16;
    c.max_w = std::max(20, page_w / 2);
    c.min_h = 12;
    c.max_h = std::max(16, page_h / 2);
  }
  return c;
}

nlohmann::json rgb_json(const Rgb& c) {
  return nlohmann::json::array({static_cast<int>(c.r), static_cast<int>(c.g),
                                static_cast<int>(c.b)});
}

}  // namespace

std::string item_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  return buf;
}

std::string manifest_to_json(const Manifest& m) {
  nlohmann::json j;
  j["format_version"] = m.format_version;
  j["kind"] = m.kind;
  j["item_ids"] = m.item_ids;
  j["page_size"] = nlohmann::json::array({m.page_w, m.page_h});
  j["palette"]["background"] = rgb_json(kPaletteBackground);
  j["palette"]["text"] = rgb_json(kPaletteText);
  j["palette"]["picture"] = rgb_json(kPalettePicture);
  j["atlas_metrics"]["glyph_width_px"] = m.glyph_width_px;
  j["atlas_metrics"]["glyph_height_px"] = m.glyph_height_px;
  j["generator_seed"] = m.generator_seed;
  if (m.has_render_params()) {
    j["render"]["provider"] = m.saliency_provider;
    j["render"]["sigma_px"] = m.render_sigma_px;
  }
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: parse error: ") + e.what());
  }
  Manifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != 1)
      throw DataError("manifest: unsupported format_version " +
                      std::to_string(m.format_version));
    m.kind = j.at("kind").get<std::string>();
    if (m.kind != "newspaper" && m.kind != "text")
      throw DataError("manifest: unknown kind '" + m.kind + "'");
    m.item_ids = j.at("item_ids").get<std::vector<std::string>>();
    m.page_w = j.at("page_size").at(0).get<int>();
    m.page_h = j.at("page_size").at(1).get<int>();
    m.glyph_width_px = j.at("atlas_metrics").at("glyph_width_px").get<int>();
    m.glyph_height_px = j.at("atlas_metrics").at("glyph_height_px").get<int>();
    m.generator_seed = j.at("generator_seed").get<std::uint64_t>();
    if (j.contains("render")) {
      m.saliency_provider = j.at("render").at("provider").get<std::string>();
      m.render_sigma_px = j.at("render").at("sigma_px").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: missing or malformed field: ") + e.what());
  }
  return m;
}

Manifest load_manifest(const std::string& dataset_dir) {
  const std::string path = dataset_dir + "/manifest.json";
  std::ifstream in(path);
  if (!in) throw IoError("load_manifest: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return manifest_from_json(ss.str());
}

void save_manifest(const std::string& dataset_dir, const Manifest& m) {
  write_text_file(dataset_dir + "/manifest.json", manifest_to_json(m));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Manifest gen_text_corpus(const std::string& dataset_dir, int n, std::uint64_t seed,
                         const GlyphAtlas& atlas, int page_w, int page_h, int rows,
                         int words_per_row) {
  if (n <= 0) throw ConfigError("gen_text_corpus: n must be positive");
  fs::create_directories(dataset_dir + "/text");
  fs::create_directories(dataset_dir + "/fixations");

  Manifest m;
  m.kind = "text";
  m.page_w = page_w;
  m.page_h = page_h;
  m.glyph_width_px = atlas.glyph_width_px;
  m.glyph_height_px = atlas.glyph_height_px;
  m.generator_seed = seed;

  for (int i = 0; i < n; ++i) {
    const std::string id = item_name(i);
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));

    TextPageSpec spec;
    spec.page_w = page_w;
    spec.page_h = page_h;
    spec.rows = rows;
    spec.words_per_row = words_per_row;
    spec.words = sample_page_words(rng, atlas, page_w, rows, words_per_row);

    const auto boxes = layout_words(spec, atlas);
    write_png(dataset_dir + "/text/" + id + ".png", render_text_page(spec, atlas));
    save_trial(dataset_dir + "/fixations/" + id + ".json", synth_trial(rng, id, boxes));
    m.item_ids.push_back(id);
  }
  save_manifest(dataset_dir, m);
  return m;
}

Manifest gen_newspaper_corpus(const std::string& dataset_dir, int n, std::uint64_t seed,
                              const GlyphAtlas& atlas, int page_w, int page_h) {
  if (n <= 0) throw ConfigError("gen_newspaper_corpus: n must be positive");
  fs::create_directories(dataset_dir + "/seg");
  fs::create_directories(dataset_dir + "/detail");

  Manifest m;
  m.kind = "newspaper";
  m.page_w = page_w;
  m.page_h = page_h;
  m.glyph_width_px = atlas.glyph_width_px;
  m.glyph_height_px = atlas.glyph_height_px;
  m.generator_seed = seed;

  const LayoutConstraints constraints = constraints_for_page(page_w, page_h);
  for (int i = 0; i < n; ++i) {
    const std::string id = item_name(i);
    const std::uint64_t item_seed = mix_seed(seed, static_cast<std::uint64_t>(i));
    const NewspaperLayout layout =
        sample_newspaper_layout(item_seed, constraints, page_w, page_h);
    write_png(dataset_dir + "/seg/" + id + ".png", render_segmented(layout));
    write_png(dataset_dir + "/detail/" + id + ".png",
              render_detailed(layout, atlas, mix_seed(item_seed, 1)));
    m.item_ids.push_back(id);
  }
  save_manifest(dataset_dir, m);
  return m;
}

ImageF load_item_image(const std::string& dataset_dir, const std::string& subdir,
                       const std::string& item_id) {
  return read_png(dataset_dir + "/" + subdir + "/" + item_id + ".png").image;
}

std::pair<std::vector<std::string>, std::vector<std::string>> split_dataset(
    const std::vector<std::string>& item_ids, double test_fraction, std::uint64_t seed) {
  if (item_ids.empty()) throw ConfigError("split_dataset: empty id list");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("split_dataset: test_fraction must lie in (0, 1), got " +
                      std::to_string(test_fraction));
  std::vector<std::string> shuffled = item_ids;
  std::mt19937_64 rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(shuffled.size())));
  std::vector<std::string> test(shuffled.begin(), shuffled.begin() + n_test);
  std::vector<std::string> train(shuffled.begin() + n_test, shuffled.end());
  return {train, test};
}

}  // namespace gazekit
