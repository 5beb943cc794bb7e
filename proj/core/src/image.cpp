// Copyright 2026 The avsync Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avsync/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "avsync/errors.hpp"

namespace avsync {

Image Image::gray(std::size_t height, std::size_t width, Real fill) {
  Image img;
  img.height = height;
  img.width = width;
  img.channels = 1;
  img.pixels.assign(height * width, fill);
  return img;
}

namespace {

// Header tokens of a netpbm file, skipping whitespace and '#' comments.
class PnmHeader {
 public:
  PnmHeader(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  std::size_t number() {
    skip();
    std::size_t value = 0;
    bool any = false;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      any = true;
    }
    if (!any) throw InputError("bad PGM header in " + path_.string());
    return value;
  }
  /// Skips the single whitespace byte that ends the header; returns the payload offset.
  std::size_t payload_offset() { return ++pos_; }

 private:
  void skip() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 2;  // past the magic
};

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open image " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 2 || bytes[0] != 'P') throw InputError("not a netpbm image: " + path.string());
  if (bytes[1] == '6' || bytes[1] == '3') throw InputError("non-grayscale image " + path.string());
  if (bytes[1] != '5') throw InputError("unsupported netpbm variant in " + path.string() + " (need P5)");

  PnmHeader header(bytes, path);
  const std::size_t width = header.number();
  const std::size_t height = header.number();
  const std::size_t maxval = header.number();
  const std::size_t start = header.payload_offset();
  if (width == 0 || height == 0) throw InputError("empty image " + path.string());
  if (maxval == 0 || maxval > 255) throw InputError("only 8-bit PGM is supported: " + path.string());
  if (bytes.size() < start + width * height) throw InputError("truncated PGM payload in " + path.string());

  Image img = Image::gray(height, width);
  const Real scale = Real(255) / static_cast<Real>(maxval);
  for (std::size_t i = 0; i < width * height; ++i) img.pixels[i] = static_cast<Real>(bytes[start + i]) * scale;
  return img;
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
  if (image.channels != 1) throw InputError("write_pgm needs a single-channel image");
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.pixels.size());
  for (Real v : image.pixels) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp<long>(std::lround(v), 0, 255))));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write image " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

Image resize_bilinear(const Image& image, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw ShapeError("resize target must be non-empty");
  if (image.height == height && image.width == width) return image;
  Image out;
  out.height = height;
  out.width = width;
  out.channels = image.channels;
  out.pixels.assign(height * width * image.channels, Real(0));

  const double sy = static_cast<double>(image.height) / static_cast<double>(height);
  const double sx = static_cast<double>(image.width) / static_cast<double>(width);
  auto source = [](double dst, double scale, std::size_t extent, std::size_t& i0, std::size_t& i1, double& frac) {
    const double src = std::clamp((dst + 0.5) * scale - 0.5, 0.0, static_cast<double>(extent - 1));
    i0 = static_cast<std::size_t>(std::floor(src));
    i1 = std::min(i0 + 1, extent - 1);
    frac = src - static_cast<double>(i0);
  };
  const std::size_t ch = image.channels;
  for (std::size_t y = 0; y < height; ++y) {
    std::size_t y0, y1;
    double fy;
    source(static_cast<double>(y), sy, image.height, y0, y1, fy);
    for (std::size_t x = 0; x < width; ++x) {
      std::size_t x0, x1;
      double fx;
      source(static_cast<double>(x), sx, image.width, x0, x1, fx);
      for (std::size_t c = 0; c < ch; ++c) {
        auto px = [&](std::size_t yy, std::size_t xx) {
          return static_cast<double>(image.pixels[(yy * image.width + xx) * ch + c]);
        };
        // a + (b - a) * t keeps constant regions exactly constant.
        const double top = px(y0, x0) + (px(y0, x1) - px(y0, x0)) * fx;
        const double bottom = px(y1, x0) + (px(y1, x1) - px(y1, x0)) * fx;
        out.pixels[(y * width + x) * ch + c] = static_cast<Real>(top + (bottom - top) * fy);
      }
    }
  }
  return out;
}

}  // namespace avsync
