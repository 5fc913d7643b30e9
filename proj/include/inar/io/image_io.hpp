#pragma once

#include <optional>
#include <string>

#include "inar/image.hpp"

namespace inar::io {

struct LoadedImage {
  ImageGray gray;
  std::optional<ImageRGB> color;  // present for PPM input
};

// Reads binary PGM (P5) or PPM (P6), 8-bit, maxval 255. PPM is converted to
// gray with 0.299 R + 0.587 G + 0.114 B, rounded half-up; the original RGB
// raster is retained. Throws UnsupportedFormat / CorruptHeader /
// TruncatedPayload.
LoadedImage read_image(const std::string& path);

void write_pgm(const ImageGray& image, const std::string& path);
void write_ppm(const ImageRGB& image, const std::string& path);

}  // namespace inar::io
