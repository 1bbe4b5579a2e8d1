// textrec/imaging/synth.cc

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

#include "textrec/imaging/synth.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "textrec/imaging/font.h"

namespace textrec {

namespace {

struct InkLayout {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> mask;  // row-major, nonzero = ink
  std::vector<ColumnSpan> char_spans;
  std::vector<ColumnSpan> word_spans;

  uint8_t& At(int x, int y) { return mask[static_cast<size_t>(y) * width + x]; }
};

void BlitGlyph(InkLayout* layout, const Glyph& g, int x0, int y0, int scale) {
  for (int r = 0; r < Glyph::kRows; ++r) {
    for (int c = 0; c < g.width; ++c) {
      if (g.rows[r][c] != '#') continue;
      for (int dy = 0; dy < scale; ++dy)
        for (int dx = 0; dx < scale; ++dx)
          layout->At(x0 + c * scale + dx, y0 + r * scale + dy) = 1;
    }
  }
}

// Lays out glyph cells left to right, applying per-glyph horizontal jitter.
// Jitter never exceeds the margin or half the kerning gap, so spans stay
// disjoint and inside the canvas.
InkLayout RasterizeText(const std::vector<std::string>& words, const WordStyle& style,
                        int word_gap, Rng* rng) {
  if (words.empty()) throw std::invalid_argument("RasterizeText: no words");
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("RasterizeText: empty word");
    for (char c : w) LookupGlyph(c);  // throws on unsupported symbols
  }
  const int s = style.scale;
  if (s < 1) throw std::invalid_argument("RasterizeText: scale must be >= 1");

  InkLayout layout;
  layout.height = (Glyph::kRows + 2 * style.margin_y) * s;
  int x = style.margin_x * s;
  std::vector<int> cell_x;  // unjittered glyph cell starts
  for (size_t wi = 0; wi < words.size(); ++wi) {
    for (char c : words[wi]) {
      cell_x.push_back(x);
      x += LookupGlyph(c).width * s + style.kern * s;
    }
    x -= style.kern * s;
    if (wi + 1 < words.size()) x += word_gap * s;
  }
  layout.width = x + style.margin_x * s;
  layout.mask.assign(static_cast<size_t>(layout.width) * layout.height, 0);

  const int max_jitter = std::min({style.jitter_x, style.margin_x * s,
                                   std::max(0, style.kern * s / 2)});
  std::uniform_int_distribution<int> jitter(-max_jitter, max_jitter);

  const int y0 = style.margin_y * s;
  size_t cell = 0;
  for (const auto& word : words) {
    int word_start = -1, word_end = -1;
    for (char c : word) {
      const Glyph& g = LookupGlyph(c);
      int dx = max_jitter > 0 ? jitter(*rng) : 0;
      int gx = cell_x[cell++] + dx;
      BlitGlyph(&layout, g, gx, y0, s);
      layout.char_spans.push_back({gx, gx + g.width * s});
      if (word_start < 0) word_start = gx;
      word_end = gx + g.width * s;
    }
    layout.word_spans.push_back({word_start, word_end});
  }
  return layout;
}

void ApplyNoise(GrayImage* img, double sigma, Rng* rng) {
  if (sigma <= 0) return;
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : img->pixels) v = std::clamp(v + noise(*rng), 0.0, 1.0);
}

GrayImage ColorizeLayout(const InkLayout& layout, const WordStyle& style, Rng* rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double contrast = 1.0 + style.contrast_jitter * unit(*rng);
  const double brightness = style.brightness_jitter * unit(*rng);
  GrayImage img(layout.width, layout.height);
  for (size_t i = 0; i < layout.mask.size(); ++i) {
    double base = layout.mask[i] ? style.ink : style.paper;
    img.pixels[i] = std::clamp(0.5 + (base - 0.5) * contrast + brightness, 0.0, 1.0);
  }
  ApplyNoise(&img, style.noise_sigma, rng);
  return img;
}

}  // namespace

WordSample RenderWord(const std::string& text, const WordStyle& style, uint64_t seed) {
  Rng rng(seed);
  InkLayout layout = RasterizeText({text}, style, 0, &rng);
  WordSample sample;
  sample.image = ColorizeLayout(layout, style, &rng);
  sample.text = text;
  sample.char_spans = layout.char_spans;
  sample.seed = seed;
  return sample;
}

LineSample RenderLine(const std::vector<std::string>& words, const WordStyle& style,
                      int word_gap, uint64_t seed) {
  if (word_gap <= style.kern)
    throw std::invalid_argument("RenderLine: word gap must exceed kerning");
  Rng rng(seed);
  InkLayout layout = RasterizeText(words, style, word_gap, &rng);
  LineSample sample;
  sample.image = ColorizeLayout(layout, style, &rng);
  sample.texts = words;
  sample.word_spans = layout.word_spans;
  sample.seed = seed;
  return sample;
}

SceneSample RenderScene(int width, int height, const std::vector<SceneWord>& words,
                        const WordStyle& word_style, const SceneStyle& scene_style,
                        uint64_t seed) {
  Rng rng(seed);
  SceneSample scene;
  scene.seed = seed;
  scene.image = GrayImage(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double shade = scene_style.paper +
                     scene_style.gradient_x * (static_cast<double>(x) / width - 0.5) +
                     scene_style.gradient_y * (static_cast<double>(y) / height - 0.5);
      scene.image.At(x, y) = std::clamp(shade, 0.0, 1.0);
    }
  }

  std::vector<Box> rects;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (const SceneWord& word : words) {
    WordStyle style = word_style;
    style.scale = word.scale;
    InkLayout layout = RasterizeText({word.text}, style, 0, &rng);
    Box rect{word.x, word.y, layout.width, layout.height};
    if (rect.x < 0 || rect.y < 0 || rect.x2() > width || rect.y2() > height)
      throw std::invalid_argument("RenderScene: word '" + word.text + "' leaves the canvas");
    for (const Box& other : rects)
      if (IntersectionArea(rect, other) > 0)
        throw std::invalid_argument("RenderScene: overlapping word rasters");
    rects.push_back(rect);

    double ink = std::clamp(style.ink + 0.05 * unit(rng), 0.0, 1.0);
    for (int y = 0; y < layout.height; ++y)
      for (int x = 0; x < layout.width; ++x)
        if (layout.mask[static_cast<size_t>(y) * layout.width + x])
          scene.image.At(word.x + x, word.y + y) = ink;

    // Truth frames the glyph cells: first cell start to last cell end by the
    // full nine-row band.
    const ColumnSpan& first = layout.char_spans.front();
    const ColumnSpan& last = layout.char_spans.back();
    Box truth{word.x + first.start, word.y + style.margin_y * word.scale,
              last.end - first.start, Glyph::kRows * word.scale};
    scene.truth.push_back({truth, word.text});
  }
  ApplyNoise(&scene.image, scene_style.noise_sigma, &rng);
  return scene;
}

}  // namespace textrec
