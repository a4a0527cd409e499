#pragma once

#include <string>

#include "corrtrack/image.h"

namespace corrtrack {

/// Reads a PNG file as 8-bit RGB. Grayscale, palette, and alpha inputs are
/// converted. Throws Error on I/O or decode failure.
ImageRGB read_png(const std::string &path);

/// Writes an 8-bit RGB PNG.
void write_png(const std::string &path, const ImageRGB &image);

/// Writes an 8-bit grayscale PNG (masks: nonzero maps to 255).
void write_png_mask(const std::string &path, const SilhouetteMask &mask);

/// Writes a 16-bit grayscale PNG of a depth image, scaled so that max_depth
/// maps to 65535. Intended for debugging.
void write_png_depth(const std::string &path, const DepthImage &depth,
                     float max_depth);

}  // namespace corrtrack
