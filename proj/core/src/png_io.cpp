#include "corrtrack/png_io.h"

#include <png.h>

#include <cstdio>
#include <memory>

namespace corrtrack {

namespace {

struct FileCloser {
  void operator()(std::FILE *f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

ImageRGB read_png(const std::string &path) {
  FilePtr file{std::fopen(path.c_str(), "rb")};
  if (!file) throw Error{"read_png: cannot open " + path};

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error{"read_png: png_create_read_struct failed"};
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error{"read_png: png_create_info_struct failed"};
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error{"read_png: decode failed for " + path};
  }

  png_init_io(png, file.get());
  png_read_info(png, info);

  // Normalize everything to 8-bit RGB.
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  ImageRGB image{width, height};
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(&image.at(0, y));
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

namespace {

void write_png_impl(const std::string &path, int width, int height,
                    int bit_depth, int color_type,
                    const std::vector<png_bytep> &rows) {
  FilePtr file{std::fopen(path.c_str(), "wb")};
  if (!file) throw Error{"write_png: cannot open " + path};

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error{"write_png: png_create_write_struct failed"};
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error{"write_png: png_create_info_struct failed"};
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error{"write_png: encode failed for " + path};
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);  // rows are little-endian in memory
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png(const std::string &path, const ImageRGB &image) {
  std::vector<png_bytep> rows(image.height());
  for (int y = 0; y < image.height(); ++y)
    rows[y] = reinterpret_cast<png_bytep>(
        const_cast<Color *>(&image.at(0, y)));
  write_png_impl(path, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
                 rows);
}

void write_png_mask(const std::string &path, const SilhouetteMask &mask) {
  std::vector<std::uint8_t> bytes(mask.data().size());
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = mask.data()[i] ? 255 : 0;
  std::vector<png_bytep> rows(mask.height());
  for (int y = 0; y < mask.height(); ++y)
    rows[y] = bytes.data() + static_cast<std::size_t>(y) * mask.width();
  write_png_impl(path, mask.width(), mask.height(), 8, PNG_COLOR_TYPE_GRAY,
                 rows);
}

void write_png_depth(const std::string &path, const DepthImage &depth,
                     float max_depth) {
  if (max_depth <= 0.0f) throw Error{"write_png_depth: max_depth must be > 0"};
  std::vector<std::uint16_t> values(depth.data().size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float normalized = std::min(depth.data()[i] / max_depth, 1.0f);
    values[i] = static_cast<std::uint16_t>(normalized * 65535.0f + 0.5f);
  }
  std::vector<png_bytep> rows(depth.height());
  for (int y = 0; y < depth.height(); ++y)
    rows[y] = reinterpret_cast<png_bytep>(
        values.data() + static_cast<std::size_t>(y) * depth.width());
  write_png_impl(path, depth.width(), depth.height(), 16, PNG_COLOR_TYPE_GRAY,
                 rows);
}

}  // namespace corrtrack
