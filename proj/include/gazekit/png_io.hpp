#pragma once

#include <string>

#include "gazekit/image.hpp"

namespace gazekit {

// 8-bit PNG input/output. Writers quantize with round-half-away-from-zero
// and replace the target atomically (temp file + rename).
void write_png(const std::string& path, const ImageF& img);

struct PngReadResult {
  ImageF image;          // 1 channel for grayscale files, 3 for color
  bool was_grayscale = false;
};

PngReadResult read_png(const std::string& path);

}  // namespace gazekit
