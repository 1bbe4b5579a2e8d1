// textrec/imaging/synth.h

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

#ifndef TEXTREC_IMAGING_SYNTH_H_
#define TEXTREC_IMAGING_SYNTH_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "textrec/box.h"
#include "textrec/imaging/image.h"

namespace textrec {

// Half-open column interval [start, end).
struct ColumnSpan {
  int start = 0;
  int end = 0;
  int Width() const { return end - start; }
};

// Rendering knobs. Everything is expressed in font pixels; `scale` blows a
// font pixel up to scale x scale image pixels.
struct WordStyle {
  int scale = 3;
  int kern = 2;          // gap between adjacent glyph cells
  int margin_x = 2;      // left/right margin
  int margin_y = 1;      // top/bottom margin
  double ink = 0.12;
  double paper = 0.88;
  double noise_sigma = 0.03;        // additive Gaussian, clamped to [0,1]
  double brightness_jitter = 0.05;  // uniform +- shift of the whole image
  double contrast_jitter = 0.10;    // uniform +- scaling around 0.5
  int jitter_x = 1;                 // per-glyph horizontal shift in image px
};

struct WordSample {
  GrayImage image;
  std::string text;
  std::vector<ColumnSpan> char_spans;  // glyph cell columns, disjoint, sorted
  uint64_t seed = 0;
};

// A single text line of several words; the stand-in for detected line boxes.
struct LineSample {
  GrayImage image;
  std::vector<std::string> texts;
  std::vector<ColumnSpan> word_spans;
  uint64_t seed = 0;
};

struct SceneWord {
  std::string text;
  int x = 0;  // top-left corner of the rendered word image in the scene
  int y = 0;
  int scale = 3;
};

struct TruthWord {
  Box box;
  std::string text;
};

struct SceneStyle {
  double paper = 0.85;
  double gradient_x = 0.08;  // linear shading across the scene
  double gradient_y = 0.05;
  double noise_sigma = 0.03;
};

struct SceneSample {
  GrayImage image;
  std::vector<TruthWord> truth;
  uint64_t seed = 0;
};

// Deterministic given (text, style, seed). Throws std::invalid_argument for
// characters without a glyph, naming the offending symbol.
WordSample RenderWord(const std::string& text, const WordStyle& style, uint64_t seed);

// Multi-word line with `word_gap` font pixels between words.
LineSample RenderLine(const std::vector<std::string>& words, const WordStyle& style,
                      int word_gap, uint64_t seed);

// Composites non-overlapping words onto a shaded background. Throws if any
// two word rasters overlap or a word leaves the canvas.
SceneSample RenderScene(int width, int height, const std::vector<SceneWord>& words,
                        const WordStyle& word_style, const SceneStyle& scene_style,
                        uint64_t seed);

}  // namespace textrec

#endif  // TEXTREC_IMAGING_SYNTH_H_
