#include "inar/io/image_io.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "inar/errors.hpp"

namespace inar::io {

namespace {

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

long parse_dim(const std::string& token, const std::string& path, const char* what) {
  if (token.empty()) throw CorruptHeader(path + ": missing " + what);
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw CorruptHeader(path + ": bad " + what + " '" + token + "'");
    }
  }
  const long v = std::strtol(token.c_str(), nullptr, 10);
  if (v <= 0 || v > 1 << 20) throw CorruptHeader(path + ": bad " + what + " '" + token + "'");
  return v;
}

}  // namespace

LoadedImage read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path);

  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P') {
    throw UnsupportedFormat(path + ": not a PNM file");
  }
  if (magic[1] != '5' && magic[1] != '6') {
    throw UnsupportedFormat(path + std::string(": unsupported PNM type P") + magic[1]);
  }
  const bool is_color = magic[1] == '6';

  const long width = parse_dim(next_token(in), path, "width");
  const long height = parse_dim(next_token(in), path, "height");
  const long maxval = parse_dim(next_token(in), path, "maxval");
  if (maxval != 255) throw CorruptHeader(path + ": only maxval 255 is supported");

  const size_t n = static_cast<size_t>(width) * height * (is_color ? 3 : 1);
  std::vector<std::uint8_t> payload(n);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n) {
    throw TruncatedPayload(path + ": payload shorter than header promises");
  }

  LoadedImage out;
  out.gray.width = static_cast<int>(width);
  out.gray.height = static_cast<int>(height);
  out.gray.pixels.resize(static_cast<size_t>(width) * height);
  if (is_color) {
    ImageRGB rgb;
    rgb.width = static_cast<int>(width);
    rgb.height = static_cast<int>(height);
    rgb.rgb = std::move(payload);
    for (size_t i = 0; i < out.gray.pixels.size(); ++i) {
      out.gray.pixels[i] =
          static_cast<float>(rgb_to_gray(rgb.rgb[3 * i], rgb.rgb[3 * i + 1], rgb.rgb[3 * i + 2]));
    }
    out.color = std::move(rgb);
  } else {
    for (size_t i = 0; i < n; ++i) out.gray.pixels[i] = static_cast<float>(payload[i]);
  }
  return out;
}

void write_pgm(const ImageGray& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image: " + path);
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  std::vector<std::uint8_t> row(image.width);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      float v = image.at(x, y);
      if (v < 0) v = 0;
      if (v > 255) v = 255;
      row[x] = static_cast<std::uint8_t>(v + 0.5f);
    }
    out.write(reinterpret_cast<const char*>(row.data()), image.width);
  }
  if (!out) throw IoError("short write: " + path);
}

void write_ppm(const ImageRGB& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image: " + path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.rgb.data()),
            static_cast<std::streamsize>(image.rgb.size()));
  if (!out) throw IoError("short write: " + path);
}

}  // namespace inar::io
