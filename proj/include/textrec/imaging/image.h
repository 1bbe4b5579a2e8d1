// textrec/imaging/image.h

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

#ifndef TEXTREC_IMAGING_IMAGE_H_
#define TEXTREC_IMAGING_IMAGE_H_

#include <cstddef>
#include <string>
#include <vector>

#include "textrec/common.h"

namespace textrec {

// Row-major grayscale raster with intensities in [0, 1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0)
      : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

  double& At(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  double At(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }

  // Copies columns [x0, x0+w) x rows [y0, y0+h). Bounds are clamped to the
  // image; requesting an empty intersection throws.
  GrayImage Crop(int x0, int y0, int w, int h) const;
};

// Square patch of real values. Raw patches hold intensities; normalized
// patches are zero-mean unit-variance and unbounded.
struct Patch {
  int side = 0;
  std::vector<double> values;

  Patch() = default;
  explicit Patch(int s, double fill = 0.0)
      : side(s), values(static_cast<size_t>(s) * s, fill) {}

  double& At(int x, int y) { return values[static_cast<size_t>(y) * side + x]; }
  double At(int x, int y) const { return values[static_cast<size_t>(y) * side + x]; }
};

// (p - mean) / (std + epsilon), with the population standard deviation.
// Constant patches come out all zero.
Patch NormalizePatch(const Patch& p, double epsilon = 1e-8);

// Bilinear resample of an arbitrary rectangle to side x side.
Patch ResampleToPatch(const GrayImage& img, int x0, int y0, int w, int h, int side);

// Whole-image convenience overload.
Patch ResampleToPatch(const GrayImage& img, int side);

GrayImage InvertImage(const GrayImage& img);

// Binary PGM (P5, maxval 255). Parse failures throw PgmError with the byte
// offset where the problem was found.
struct PgmError : std::runtime_error {
  size_t offset;
  PgmError(const std::string& what, size_t byte_offset)
      : std::runtime_error(what + " (byte " + std::to_string(byte_offset) + ")"),
        offset(byte_offset) {}
};

GrayImage ReadPgm(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> WritePgm(const GrayImage& img);

GrayImage LoadPgmFile(const std::string& path);
void SavePgmFile(const GrayImage& img, const std::string& path);

}  // namespace textrec

#endif  // TEXTREC_IMAGING_IMAGE_H_
