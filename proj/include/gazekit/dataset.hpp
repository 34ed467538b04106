#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gazekit/glyph_atlas.hpp"
#include "gazekit/image.hpp"

namespace gazekit {

// On-disk layout: <dir>/{heat,seg,detail,text}/NNNN.png, <dir>/fixations/NNNN.json,
// <dir>/manifest.json. Externally produced datasets in the same layout load the
// same way.
struct Manifest {
  int format_version = 1;
  std::string kind;  // "newspaper" | "text"
  std::vector<std::string> item_ids;
  int page_w = 256;
  int page_h = 256;
  int glyph_width_px = 8;
  int glyph_height_px = 12;
  std::uint64_t generator_seed = 0;

  // Set once heatmaps have been rendered into heat/.
  std::string saliency_provider;  // "fixations" | "heuristic" | "precomputed"
  double render_sigma_px = 0;

  bool has_render_params() const { return !saliency_provider.empty(); }
};

// Zero-padded four-digit item id ("0000", "0001", ...).
std::string item_name(int index);

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text);

Manifest load_manifest(const std::string& dataset_dir);
void save_manifest(const std::string& dataset_dir, const Manifest& m);

// Derives an independent stream seed for item `salt` (splitmix-style).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Generates text/NNNN.png pages plus synthetic fixations/NNNN.json trials.
// Deterministic and idempotent per (n, seed); throws ConfigError on n <= 0.
Manifest gen_text_corpus(const std::string& dataset_dir, int n, std::uint64_t seed,
                         const GlyphAtlas& atlas, int page_w = 256, int page_h = 256,
                         int rows = 3, int words_per_row = 5);

// Generates seg/NNNN.png + detail/NNNN.png newspaper pairs (heatmaps are
// rendered later from a saliency provider).
Manifest gen_newspaper_corpus(const std::string& dataset_dir, int n, std::uint64_t seed,
                              const GlyphAtlas& atlas, int page_w = 256, int page_h = 256);

// Reads <dir>/<subdir>/<item_id>.png; throws IoError if missing.
ImageF load_item_image(const std::string& dataset_dir, const std::string& subdir,
                       const std::string& item_id);

// Seeded shuffle split; |test| = round(test_fraction * N). Throws ConfigError
// unless 0 < test_fraction < 1 and the id list is nonempty.
std::pair<std::vector<std::string>, std::vector<std::string>> split_dataset(
    const std::vector<std::string>& item_ids, double test_fraction, std::uint64_t seed);

}  // namespace gazekit
