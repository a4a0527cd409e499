#pragma once

#include <cstdint>
#include <vector>

#include "corrtrack/common.h"

namespace corrtrack {

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Color &) const = default;
};

/// Dense row-major image. Pixel (x, y) has its center at the integer
/// coordinate (x, y); x is the column, y the row.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_{width}, height_{height},
        data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }

  bool contains(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  T &at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const T &at(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::vector<T> &data() { return data_; }
  const std::vector<T> &data() const { return data_; }

  bool operator==(const Image &) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using ImageRGB = Image<Color>;

/// Per-pixel depth along the optical axis in meters; 0 marks empty pixels.
using DepthImage = Image<float>;

/// Per-pixel foreground flag (nonzero = foreground).
using SilhouetteMask = Image<std::uint8_t>;

/// Per-pixel set of visible object IDs, one bit per ID.
using OcclusionMask = Image<std::uint32_t>;

/// Foreground mask of a depth image (foreground <=> depth > 0).
SilhouetteMask silhouette_of(const DepthImage &depth);

/// Rounds a continuous image coordinate to the nearest pixel center.
inline int round_to_pixel(double coordinate) {
  return static_cast<int>(std::lround(coordinate));
}

}  // namespace corrtrack
