// textrec/imaging/image.cc

// Copyright 2026 The textrec Authors

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

#include "textrec/imaging/image.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace textrec {

GrayImage GrayImage::Crop(int x0, int y0, int w, int h) const {
  int ax0 = std::max(0, x0), ay0 = std::max(0, y0);
  int ax1 = std::min(width, x0 + w), ay1 = std::min(height, y0 + h);
  if (ax0 >= ax1 || ay0 >= ay1)
    throw std::invalid_argument("Crop: empty intersection with image");
  GrayImage out(ax1 - ax0, ay1 - ay0);
  for (int y = ay0; y < ay1; ++y)
    for (int x = ax0; x < ax1; ++x) out.At(x - ax0, y - ay0) = At(x, y);
  return out;
}

Patch NormalizePatch(const Patch& p, double epsilon) {
  if (p.side < 1) throw std::invalid_argument("NormalizePatch: empty patch");
  const size_t n = p.values.size();
  double mean = 0.0;
  for (double v : p.values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : p.values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  const double denom = std::sqrt(var) + epsilon;
  Patch out(p.side);
  for (size_t i = 0; i < n; ++i) out.values[i] = (p.values[i] - mean) / denom;
  return out;
}

Patch ResampleToPatch(const GrayImage& img, int x0, int y0, int w, int h, int side) {
  if (w < 1 || h < 1) throw std::invalid_argument("ResampleToPatch: empty source rect");
  Patch out(side);
  // Sample at destination pixel centers mapped back into the source rect,
  // clamping reads to the image border.
  const double sx = static_cast<double>(w) / side;
  const double sy = static_cast<double>(h) / side;
  for (int oy = 0; oy < side; ++oy) {
    double fy = y0 + (oy + 0.5) * sy - 0.5;
    int iy = static_cast<int>(std::floor(fy));
    double ty = fy - iy;
    int y_lo = std::clamp(iy, 0, img.height - 1);
    int y_hi = std::clamp(iy + 1, 0, img.height - 1);
    for (int ox = 0; ox < side; ++ox) {
      double fx = x0 + (ox + 0.5) * sx - 0.5;
      int ix = static_cast<int>(std::floor(fx));
      double tx = fx - ix;
      int x_lo = std::clamp(ix, 0, img.width - 1);
      int x_hi = std::clamp(ix + 1, 0, img.width - 1);
      double top = img.At(x_lo, y_lo) * (1 - tx) + img.At(x_hi, y_lo) * tx;
      double bot = img.At(x_lo, y_hi) * (1 - tx) + img.At(x_hi, y_hi) * tx;
      out.At(ox, oy) = top * (1 - ty) + bot * ty;
    }
  }
  return out;
}

Patch ResampleToPatch(const GrayImage& img, int side) {
  return ResampleToPatch(img, 0, 0, img.width, img.height, side);
}

GrayImage InvertImage(const GrayImage& img) {
  GrayImage out = img;
  for (double& v : out.pixels) v = 1.0 - v;
  return out;
}

namespace {

// PGM headers allow '#' comments and arbitrary whitespace between tokens.
struct ByteCursor {
  const std::vector<unsigned char>& bytes;
  size_t pos = 0;

  bool AtEnd() const { return pos >= bytes.size(); }

  void SkipSpaceAndComments() {
    while (!AtEnd()) {
      unsigned char c = bytes[pos];
      if (c == '#') {
        while (!AtEnd() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(c)) {
        ++pos;
      } else {
        break;
      }
    }
  }

  int ReadInt(const char* what) {
    SkipSpaceAndComments();
    size_t start = pos;
    long value = 0;
    while (!AtEnd() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1 << 30) throw PgmError(std::string("oversized ") + what, start);
      ++pos;
    }
    if (pos == start)
      throw PgmError(std::string("expected integer for ") + what, pos);
    return static_cast<int>(value);
  }
};

}  // namespace

GrayImage ReadPgm(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw PgmError("missing P5 magic", 0);
  ByteCursor cur{bytes, 2};
  int width = cur.ReadInt("width");
  int height = cur.ReadInt("height");
  int maxval = cur.ReadInt("maxval");
  if (width < 1 || height < 1) throw PgmError("non-positive dimensions", cur.pos);
  if (maxval != 255) throw PgmError("unsupported maxval (want 255)", cur.pos);
  if (cur.AtEnd()) throw PgmError("missing whitespace before payload", cur.pos);
  if (!std::isspace(bytes[cur.pos]))
    throw PgmError("expected single whitespace before payload", cur.pos);
  ++cur.pos;
  const size_t need = static_cast<size_t>(width) * height;
  if (bytes.size() - cur.pos < need)
    throw PgmError("truncated payload", bytes.size());
  GrayImage img(width, height);
  for (size_t i = 0; i < need; ++i)
    img.pixels[i] = bytes[cur.pos + i] / 255.0;
  return img;
}

std::vector<unsigned char> WritePgm(const GrayImage& img) {
  if (img.width < 1 || img.height < 1)
    throw std::invalid_argument("WritePgm: empty image");
  std::string header = "P5 " + std::to_string(img.width) + " " +
                       std::to_string(img.height) + " 255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + img.pixels.size());
  for (double v : img.pixels) {
    double clamped = std::clamp(v, 0.0, 1.0);
    out.push_back(static_cast<unsigned char>(std::lround(clamped * 255.0)));
  }
  return out;
}

GrayImage LoadPgmFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return ReadPgm(bytes);
}

void SavePgmFile(const GrayImage& img, const std::string& path) {
  auto bytes = WritePgm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace textrec
