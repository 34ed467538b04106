#include "gazekit/saliency.hpp"

#include <cmath>
#include <vector>

#include "gazekit/png_io.hpp"

namespace gazekit {

namespace {

enum class PixelClass : std::uint8_t { Background, Text, Picture };

PixelClass classify(float r, float g, float b) {
  if (r == kPalettePicture.r && g == kPalettePicture.g && b == kPalettePicture.b)
    return PixelClass::Picture;
  if (r == kPaletteText.r && g == kPaletteText.g && b == kPaletteText.b) return PixelClass::Text;
  if (r >= 250.f && g >= 250.f && b >= 250.f) return PixelClass::Background;
  const float y = 0.299f * r + 0.587f * g + 0.114f * b;
  return y < 100.f ? PixelClass::Text : PixelClass::Picture;
}

// Separable Gaussian blur, truncated at 3 sigma.
Plane<float> gaussian_blur(const Plane<float>& src, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<float> kernel(2 * radius + 1);
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = static_cast<float>(std::exp(-(i * i) / (2.0 * sigma * sigma)));
    sum += kernel[i + radius];
  }
  for (auto& k : kernel) k = static_cast<float>(k / sum);

  const int h = static_cast<int>(src.rows()), w = static_cast<int>(src.cols());
  Plane<float> tmp = Plane<float>::Zero(h, w), dst = Plane<float>::Zero(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int k = -radius; k <= radius; ++k) {
        const int xx = std::clamp(x + k, 0, w - 1);
        acc += kernel[k + radius] * src(y, xx);
      }
      tmp(y, x) = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int k = -radius; k <= radius; ++k) {
        const int yy = std::clamp(y + k, 0, h - 1);
        acc += kernel[k + radius] * tmp(yy, x);
      }
      dst(y, x) = acc;
    }
  return dst;
}

void stamp_blob(Plane<float>& map, double cx, double cy, double amp, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const int h = static_cast<int>(map.rows()), w = static_cast<int>(map.cols());
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const int icx = static_cast<int>(std::lround(cx)), icy = static_cast<int>(std::lround(cy));
  for (int y = std::max(0, icy - radius); y <= std::min(h - 1, icy + radius); ++y)
    for (int x = std::max(0, icx - radius); x <= std::min(w - 1, icx + radius); ++x) {
      const double dx = x - cx, dy = y - cy;
      const float v = static_cast<float>(amp * std::exp(-(dx * dx + dy * dy) * inv));
      map(y, x) = std::max(map(y, x), v);
    }
}

struct HeuristicSource : SaliencySource {
  Heatmap saliency_for(const ImageF& page, const std::string&) override {
    return heuristic_saliency(page);
  }
};

struct PrecomputedSource : SaliencySource {
  std::string dir;
  int page_w, page_h;
  PrecomputedSource(std::string d, int w, int h) : dir(std::move(d)), page_w(w), page_h(h) {}
  Heatmap saliency_for(const ImageF&, const std::string& item_id) override {
    return load_precomputed_saliency(dir + "/" + item_id + ".png", page_w, page_h);
  }
};

}  // namespace

Heatmap heuristic_saliency(const ImageF& page) {
  if (page.channel_count() != 3) throw ContractError("heuristic_saliency: expected 3 channels");
  const int w = page.width, h = page.height;

  Plane<float> picture = Plane<float>::Zero(h, w);
  Plane<float> text = Plane<float>::Zero(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      switch (classify(page.at(0, y, x), page.at(1, y, x), page.at(2, y, x))) {
        case PixelClass::Picture: picture(y, x) = 1.f; break;
        case PixelClass::Text: text(y, x) = 1.f; break;
        case PixelClass::Background: break;
      }
    }

  // Picture areas: softened mask at full amplitude.
  Plane<float> salience = gaussian_blur(picture, 4.0);

  // Text areas: medium blobs stepped along each text line.
  std::vector<std::pair<int, int>> line_spans;  // (y0, y1) of consecutive text rows
  int run_start = -1;
  for (int y = 0; y <= h; ++y) {
    const bool has_text = y < h && (text.row(y) > 0.5f).any();
    if (has_text && run_start < 0) run_start = y;
    if (!has_text && run_start >= 0) {
      line_spans.emplace_back(run_start, y);
      run_start = -1;
    }
  }
  for (const auto& [y0, y1] : line_spans) {
    const double cy = 0.5 * (y0 + y1 - 1);
    int first = -1, last = -1;
    for (int x = 0; x < w; ++x)
      if ((text.col(x).segment(y0, y1 - y0) > 0.5f).any()) {
        if (first < 0) first = x;
        last = x;
      }
    if (first < 0) continue;
    for (int cx = first + 8; cx <= last; cx += 16) stamp_blob(salience, cx, cy, 0.45, 3.0);
  }

  // Center prior over a small floor, normalized to peak 255.
  const double sp = 0.75 * std::min(w, h);
  const double cx = 0.5 * w, cy = 0.5 * h;
  Plane<float> out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = (x + 0.5) - cx, dy = (y + 0.5) - cy;
      const double prior = std::exp(-(dx * dx + dy * dy) / (2.0 * sp * sp));
      out(y, x) = static_cast<float>((0.05 + salience(y, x)) * prior);
    }
  const float peak = out.maxCoeff();
  out *= 255.f / peak;

  Heatmap map;
  map.intensities = std::move(out);
  return map;
}

Heatmap load_precomputed_saliency(const std::string& path, int page_w, int page_h) {
  PngReadResult res = read_png(path);
  if (!res.was_grayscale)
    throw DataError("load_precomputed_saliency: " + path + " is not a grayscale PNG");
  if (res.image.width != page_w || res.image.height != page_h)
    throw DataError("load_precomputed_saliency: " + path + " is " +
                    std::to_string(res.image.width) + "x" + std::to_string(res.image.height) +
                    ", expected " + std::to_string(page_w) + "x" + std::to_string(page_h));
  Heatmap map;
  map.intensities = res.image.channels[0];
  return map;
}

std::unique_ptr<SaliencySource> make_heuristic_source() {
  return std::make_unique<HeuristicSource>();
}

std::unique_ptr<SaliencySource> make_precomputed_source(std::string dir, int page_w, int page_h) {
  return std::make_unique<PrecomputedSource>(std::move(dir), page_w, page_h);
}

}  // namespace gazekit
