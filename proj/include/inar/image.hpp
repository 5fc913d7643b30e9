#pragma once

#include <cstdint>
#include <vector>

namespace inar {

// Row-major grayscale raster. Values are 8-bit samples widened to float so
// gradient and interpolation code does not keep converting.
struct ImageGray {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;  // width * height, [0, 255]

  float at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
  float& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  bool inside(double x, double y) const { return x >= 0.0 && y >= 0.0 && x < width && y < height; }

  static ImageGray constant(int w, int h, float value) {
    return ImageGray{w, h, std::vector<float>(static_cast<size_t>(w) * h, value)};
  }

  // Bilinear sample; caller guarantees 0 <= x <= width-1, 0 <= y <= height-1.
  float sample(double x, double y) const {
    int x0 = static_cast<int>(x);
    int y0 = static_cast<int>(y);
    if (x0 > width - 2) x0 = width - 2;
    if (y0 > height - 2) y0 = height - 2;
    if (x0 < 0) x0 = 0;
    if (y0 < 0) y0 = 0;
    const double ax = x - x0;
    const double ay = y - y0;
    const double v00 = at(x0, y0), v10 = at(x0 + 1, y0);
    const double v01 = at(x0, y0 + 1), v11 = at(x0 + 1, y0 + 1);
    return static_cast<float>((1 - ay) * ((1 - ax) * v00 + ax * v10) +
                              ay * ((1 - ax) * v01 + ax * v11));
  }
};

// Interleaved 8-bit RGB raster.
struct ImageRGB {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // 3 * width * height

  const std::uint8_t* px(int x, int y) const { return &rgb[3 * (static_cast<size_t>(y) * width + x)]; }
  std::uint8_t* px(int x, int y) { return &rgb[3 * (static_cast<size_t>(y) * width + x)]; }

  static ImageRGB constant(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    ImageRGB img{w, h, std::vector<std::uint8_t>(static_cast<size_t>(w) * h * 3)};
    for (size_t i = 0; i < img.rgb.size(); i += 3) {
      img.rgb[i] = r;
      img.rgb[i + 1] = g;
      img.rgb[i + 2] = b;
    }
    return img;
  }
};

// Rec.601 luma, rounded half-up, as used for PPM ingest.
inline std::uint8_t rgb_to_gray(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  int v = static_cast<int>(y + 0.5);
  if (v > 255) v = 255;
  return static_cast<std::uint8_t>(v);
}

}  // namespace inar
