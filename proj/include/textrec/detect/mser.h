// textrec/detect/mser.h

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

// Maximally stable extremal regions via a union-find sweep over the 256
// intensity thresholds.  Regions of both polarities are produced by running
// the sweep on the image and on its inversion.

#ifndef TEXTREC_DETECT_MSER_H_
#define TEXTREC_DETECT_MSER_H_

#include <vector>

#include "textrec/box.h"
#include "textrec/imaging/image.h"

namespace textrec {

struct MserParams {
  int delta = 5;                // levels on each side for the variation
  int min_area = 15;            // pixels
  double max_area_frac = 0.25;  // of the whole image
  double max_variation = 0.5;
};

// Horizontal run of pixels: (x, x+len) at row y.
struct PixelRun {
  int y = 0;
  int x = 0;
  int len = 0;
};

struct Region {
  std::vector<PixelRun> runs;  // sorted by (y, x), maximal runs
  Box box;                     // tight bounding box
  bool bright_on_dark = false;
  double variation = 0.0;      // stability score at `level`
  int level = 0;               // threshold where the region was extracted
  int area = 0;

  int CenterX() const { return box.x + box.w / 2; }
  int CenterY() const { return box.y + box.h / 2; }
};

// 4-connected extremal regions whose area is stable across thresholds:
// variation (|Q_{t+d}| - |Q_{t-d}|) / |Q_t| is a local minimum over the
// region's lifetime and <= max_variation, with the area inside bounds.
std::vector<Region> ExtractMsers(const GrayImage& img, const MserParams& params = {});

}  // namespace textrec

#endif  // TEXTREC_DETECT_MSER_H_
