// src/datasets.cc

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

#include "textrec/data/datasets.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace textrec {
namespace {

Patch ToPatch(const GrayImage& img, int patch_side) {
  return NormalizePatch(ResampleToPatch(img, patch_side));
}

Patch CropToPatch(const GrayImage& img, int x0, int w, int patch_side) {
  return NormalizePatch(ResampleToPatch(img, x0, 0, w, img.height, patch_side));
}

// Pure background: paper shade with the style's noise and a soft gradient.
GrayImage NoiseImage(int w, int h, const WordStyle& style, Rng& rng) {
  GrayImage img(w, h, style.paper);
  std::normal_distribution<double> noise(0.0, std::max(1e-3, style.noise_sigma));
  std::uniform_real_distribution<double> grad(-0.05, 0.05);
  const double gx = grad(rng), gy = grad(rng);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double v = img.At(x, y) + noise(rng) + gx * x / w + gy * y / h;
      img.At(x, y) = std::clamp(v, 0.0, 1.0);
    }
  return img;
}

}  // namespace

WordStyle SampleStyle(Rng& rng, const JitterConfig& jitter) {
  WordStyle style;
  style.scale = std::uniform_int_distribution<int>(jitter.scale_min, jitter.scale_max)(rng);
  style.noise_sigma = std::uniform_real_distribution<double>(0.0, jitter.noise_max)(rng);
  style.brightness_jitter =
      std::uniform_real_distribution<double>(0.0, jitter.brightness_max)(rng);
  style.contrast_jitter =
      std::uniform_real_distribution<double>(0.0, jitter.contrast_max)(rng);
  return style;
}

PatchDataset BuildCharDataset(const Alphabet& alphabet, int per_class, uint64_t seed,
                              int patch_side, const JitterConfig& jitter) {
  if (per_class < 1) throw std::invalid_argument("datasets: per_class must be >= 1");
  Rng rng(seed);
  PatchDataset data;
  data.reserve(static_cast<size_t>(alphabet.size()) * per_class);
  for (int c = 0; c < alphabet.size(); ++c) {
    const std::string text(1, alphabet.Symbol(c));
    for (int i = 0; i < per_class; ++i) {
      const WordStyle style = SampleStyle(rng, jitter);
      const WordSample ws = RenderWord(text, style, rng());
      data.push_back({ToPatch(ws.image, patch_side), c});
    }
  }
  return data;
}

PatchDataset DeriveCorrectionPatches(const std::vector<WordSample>& words,
                                     uint64_t seed, int patch_side) {
  Rng rng(seed);
  PatchDataset data;
  for (const WordSample& ws : words) {
    const auto& spans = ws.char_spans;
    if (spans.empty()) continue;
    std::uniform_int_distribution<int> pick_char(0, static_cast<int>(spans.size()) - 1);

    const ColumnSpan whole = spans[pick_char(rng)];
    data.push_back({CropToPatch(ws.image, whole.start, whole.Width(), patch_side), 0});

    const ColumnSpan frag_src = spans[pick_char(rng)];
    const int half = std::max(1, frag_src.Width() / 2);
    const int frag_start =
        std::bernoulli_distribution(0.5)(rng) ? frag_src.start : frag_src.end - half;
    data.push_back({CropToPatch(ws.image, frag_start, half, patch_side), 1});

    if (spans.size() >= 2) {
      std::uniform_int_distribution<int> pick_pair(0, static_cast<int>(spans.size()) - 2);
      const int p = pick_pair(rng);
      data.push_back({CropToPatch(ws.image, spans[p].start,
                                  spans[p + 1].end - spans[p].start, patch_side),
                      2});
    }
  }
  return data;
}

PatchDataset BuildCorrectionDataset(int per_class, uint64_t seed, int patch_side,
                                    const JitterConfig& jitter) {
  if (per_class < 1) throw std::invalid_argument("datasets: per_class must be >= 1");
  Rng rng(seed);
  const Alphabet& alphabet = Alphabet::Full();
  std::uniform_int_distribution<int> pick_sym(0, alphabet.size() - 1);
  std::vector<WordSample> words;
  words.reserve(per_class);
  for (int i = 0; i < per_class; ++i) {
    std::string text;
    for (int k = 0; k < 3; ++k) text.push_back(alphabet.Symbol(pick_sym(rng)));
    words.push_back(RenderWord(text, SampleStyle(rng, jitter), rng()));
  }
  return DeriveCorrectionPatches(words, rng(), patch_side);
}

PatchDataset DeriveDetectPatches(const std::vector<WordSample>& words, uint64_t seed,
                                 int patch_side) {
  Rng rng(seed);
  PatchDataset data;
  data.reserve(words.size() * 2);
  for (size_t i = 0; i < words.size(); ++i) {
    const WordSample& ws = words[i];
    data.push_back({ToPatch(ws.image, patch_side), 1});

    std::vector<double> sorted = ws.image.pixels;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double paper = sorted[sorted.size() / 2];  // ink is the minority

    // Negatives rotate over three junk families.
    const int family = static_cast<int>(i % 3);
    if (family == 1 && !ws.char_spans.empty()) {
      // A sliver of margin plus the first glyph columns: not a whole word.
      const int w = std::max(2, ws.char_spans.front().Width() / 2);
      data.push_back({CropToPatch(ws.image, 0, w, patch_side), 0});
    } else if (family == 2 && words.size() >= 2) {
      // Two words side by side with a paper gap reads as "not one word".
      const WordSample& other =
          words[std::uniform_int_distribution<size_t>(0, words.size() - 1)(rng)];
      const int gap = std::uniform_int_distribution<int>(6, 14)(rng);
      const int h = std::max(ws.image.height, other.image.height);
      GrayImage strip(ws.image.width + gap + other.image.width, h, paper);
      const auto blit = [&strip](const GrayImage& src, int x0, int y0) {
        for (int y = 0; y < src.height; ++y)
          for (int x = 0; x < src.width; ++x) strip.At(x0 + x, y0 + y) = src.At(x, y);
      };
      blit(ws.image, 0, (h - ws.image.height) / 2);
      blit(other.image, ws.image.width + gap, (h - other.image.height) / 2);
      data.push_back({ToPatch(strip, patch_side), 0});
    } else {
      WordStyle bg_style;
      bg_style.paper = paper;
      bg_style.noise_sigma = std::uniform_real_distribution<double>(0.01, 0.05)(rng);
      const GrayImage bg =
          NoiseImage(std::max(8, ws.image.width), ws.image.height, bg_style, rng);
      data.push_back({ToPatch(bg, patch_side), 0});
    }
  }
  return data;
}

PatchDataset BuildDetectDataset(int per_class, uint64_t seed, int patch_side,
                                const JitterConfig& jitter) {
  if (per_class < 1) throw std::invalid_argument("datasets: per_class must be >= 1");
  Rng rng(seed);
  std::vector<WordSample> words;
  words.reserve(per_class);
  for (int i = 0; i < per_class; ++i)
    words.push_back(RenderWord(RandomWord(rng, 2, 7), SampleStyle(rng, jitter), rng()));
  return DeriveDetectPatches(words, rng(), patch_side);
}

std::string RandomWord(Rng& rng, int len_min, int len_max, const std::string& charset) {
  if (charset.empty() || len_min < 1 || len_max < len_min)
    throw std::invalid_argument("datasets: bad random-word parameters");
  std::uniform_int_distribution<int> len_dist(len_min, len_max);
  std::uniform_int_distribution<size_t> sym_dist(0, charset.size() - 1);
  const int len = len_dist(rng);
  std::string word;
  word.reserve(len);
  for (int i = 0; i < len; ++i) word.push_back(charset[sym_dist(rng)]);
  return word;
}

std::vector<std::string> RandomWordList(int count, uint64_t seed, int len_min,
                                        int len_max) {
  Rng rng(seed);
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (static_cast<int>(words.size()) < count) {
    std::string w = RandomWord(rng, len_min, len_max);
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

std::vector<std::string> LexiconWithDistractors(const std::vector<std::string>& targets,
                                                int num_distractors, uint64_t seed) {
  Rng rng(seed);
  std::set<std::string> seen(targets.begin(), targets.end());
  std::vector<std::string> out = targets;
  while (static_cast<int>(out.size()) < static_cast<int>(targets.size()) + num_distractors) {
    std::string w = RandomWord(rng, 3, 8);
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

std::vector<WordSample> BuildWordSamples(const std::vector<std::string>& words,
                                         uint64_t seed, const JitterConfig& jitter) {
  Rng rng(seed);
  std::vector<WordSample> samples;
  samples.reserve(words.size());
  for (const std::string& w : words)
    samples.push_back(RenderWord(w, SampleStyle(rng, jitter), rng()));
  return samples;
}

std::vector<LineSample> BuildLineSamples(int count, uint64_t seed,
                                         const JitterConfig& jitter) {
  Rng rng(seed);
  std::vector<LineSample> lines;
  lines.reserve(count);
  std::uniform_int_distribution<int> num_words(2, 4);
  std::uniform_int_distribution<int> word_gap(4, 9);
  for (int i = 0; i < count; ++i) {
    const int n = num_words(rng);
    std::vector<std::string> words;
    for (int k = 0; k < n; ++k) words.push_back(RandomWord(rng, 2, 6));
    lines.push_back(RenderLine(words, SampleStyle(rng, jitter), word_gap(rng), rng()));
  }
  return lines;
}

std::vector<SceneSample> BuildSceneSuite(int count, uint64_t seed,
                                         const SceneSuiteConfig& config) {
  Rng rng(seed);
  std::vector<SceneSample> scenes;
  scenes.reserve(count);
  std::uniform_int_distribution<int> num_words(config.words_min, config.words_max);
  for (int i = 0; i < count; ++i) {
    const WordStyle style = SampleStyle(rng, config.jitter);
    const int n = num_words(rng);
    std::vector<SceneWord> placed;
    std::vector<Box> rasters;
    for (int k = 0; k < n; ++k) {
      const std::string text = RandomWord(rng, 3, 7);
      // Probe render measures the raster so placement can avoid overlap.
      const WordSample probe = RenderWord(text, style, 0);
      const int w = probe.image.width, h = probe.image.height;
      if (w + 2 > config.width || h + 2 > config.height) continue;
      std::uniform_int_distribution<int> px(1, config.width - w - 1);
      std::uniform_int_distribution<int> py(1, config.height - h - 1);
      for (int attempt = 0; attempt < 40; ++attempt) {
        const Box cand{px(rng), py(rng), w, h};
        // A full word height of vertical clearance keeps separate lines
        // farther apart than the line clusterer's normalized gap threshold.
        const Box grown{cand.x - 8, cand.y - h, cand.w + 16, cand.h + 2 * h};
        bool clear = true;
        for (const Box& r : rasters)
          if (IntersectionArea(grown, r) > 0) {
            clear = false;
            break;
          }
        if (!clear) continue;
        placed.push_back({text, cand.x, cand.y, style.scale});
        rasters.push_back(cand);
        break;
      }
    }
    SceneStyle scene_style;
    scene_style.noise_sigma = style.noise_sigma;
    scenes.push_back(
        RenderScene(config.width, config.height, placed, style, scene_style, rng()));
  }
  return scenes;
}

std::vector<WordSample> LinesFromScene(const GrayImage& img,
                                       const std::vector<TruthWord>& truth,
                                       int margin) {
  // Transitive closure of pairwise vertical overlap groups boxes into rows.
  const int n = static_cast<int>(truth.size());
  std::vector<int> row(n);
  for (int i = 0; i < n; ++i) row[i] = i;
  const auto find = [&row](int i) {
    while (row[i] != i) i = row[i] = row[row[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Box &a = truth[i].box, &b = truth[j].box;
      if (std::max(a.y, b.y) < std::min(a.y2(), b.y2())) row[find(i)] = find(j);
    }

  std::vector<std::vector<int>> groups;
  std::vector<int> group_of(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (group_of[r] < 0) {
      group_of[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[group_of[r]].push_back(i);
  }

  std::vector<WordSample> lines;
  lines.reserve(groups.size());
  for (const auto& members : groups) {
    Box line = truth[members.front()].box;
    for (int i : members) line = BoundingUnion(line, truth[i].box);
    const int x0 = std::max(0, line.x - margin), y0 = std::max(0, line.y - margin);
    const int x1 = std::min(img.width, line.x2() + margin);
    const int y1 = std::min(img.height, line.y2() + margin);

    WordSample sample;
    sample.image = img.Crop(x0, y0, x1 - x0, y1 - y0);
    for (int i : members)
      sample.char_spans.push_back({truth[i].box.x - x0, truth[i].box.x2() - x0});
    std::sort(sample.char_spans.begin(), sample.char_spans.end(),
              [](const ColumnSpan& a, const ColumnSpan& b) { return a.start < b.start; });
    lines.push_back(std::move(sample));
  }
  return lines;
}

}  // namespace textrec
