#include "gazekit/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

namespace gazekit {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_png(const std::string& path, const ImageF& img) {
  const int nch = img.channel_count();
  if (nch != 1 && nch != 3) throw ContractError("write_png: expected 1 or 3 channels");
  if (img.width <= 0 || img.height <= 0) throw ContractError("write_png: empty image");

  const std::string tmp = path + ".tmp";
  FilePtr fp(std::fopen(tmp.c_str(), "wb"));
  if (!fp) throw IoError("write_png: cannot open " + tmp);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("write_png: libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::filesystem::remove(tmp);
    throw IoError("write_png: libpng error writing " + path);
  }

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8,
               nch == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * nch);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < nch; ++c) row[static_cast<std::size_t>(x) * nch + c] = quantize_u8(img.at(c, y, x));
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  fp.reset();

  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("write_png: rename to " + path + " failed: " + ec.message());
}

PngReadResult read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("read_png: cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("read_png: libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("read_png: libpng error reading " + path);
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  const bool gray_source =
      color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA;

  // Normalize everything to 8-bit gray or RGB.
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int nch = gray_source ? 1 : 3;
  PngReadResult out;
  out.was_grayscale = gray_source;
  out.image = ImageF(static_cast<int>(w), static_cast<int>(h), nch);

  std::vector<std::uint8_t> row(png_get_rowbytes(png, info));
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x)
      for (int c = 0; c < nch; ++c)
        out.image.at(c, static_cast<int>(y), static_cast<int>(x)) =
            static_cast<float>(row[static_cast<std::size_t>(x) * nch + c]);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace gazekit
