#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gazekit/errors.hpp"

namespace gazekit {

template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Planar image: one Eigen array per channel, indexed (y, x), values in [0, 255].
template <typename Scalar>
struct PlanarImage {
  int width = 0;
  int height = 0;
  std::vector<Plane<Scalar>> channels;

  PlanarImage() = default;
  PlanarImage(int w, int h, int nch, Scalar fill = Scalar(0)) : width(w), height(h) {
    channels.assign(nch, Plane<Scalar>::Constant(h, w, fill));
  }

  int channel_count() const { return static_cast<int>(channels.size()); }

  Scalar& at(int ch, int y, int x) { return channels[ch](y, x); }
  Scalar at(int ch, int y, int x) const { return channels[ch](y, x); }
};

using ImageF = PlanarImage<float>;

struct Rgb {
  float r, g, b;
};

// Segmented-page palette.
inline constexpr Rgb kPaletteBackground{255.f, 255.f, 255.f};
inline constexpr Rgb kPaletteText{0.f, 0.f, 255.f};
inline constexpr Rgb kPalettePicture{255.f, 0.f, 0.f};

inline const std::array<Rgb, 3>& palette_colors() {
  static const std::array<Rgb, 3> p{kPaletteBackground, kPaletteText, kPalettePicture};
  return p;
}

// Rec. 601 luma weights.
template <typename Scalar>
Plane<Scalar> luma(const PlanarImage<Scalar>& img) {
  if (img.channel_count() == 1) return img.channels[0];
  if (img.channel_count() != 3) throw ContractError("luma: expected 1 or 3 channels");
  return Scalar(0.299) * img.channels[0] + Scalar(0.587) * img.channels[1] +
         Scalar(0.114) * img.channels[2];
}

// Round half away from zero, clamped to [0, 255].
inline std::uint8_t quantize_u8(double v) {
  if (v <= 0.0) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::llround(v));
}

template <typename Scalar>
bool same_shape(const PlanarImage<Scalar>& a, const PlanarImage<Scalar>& b) {
  return a.width == b.width && a.height == b.height && a.channel_count() == b.channel_count();
}

}  // namespace gazekit
