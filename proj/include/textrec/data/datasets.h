// textrec/data/datasets.h

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

// Synthetic corpora for training and evaluation. Every builder is
// deterministic in its seed; repeated calls yield identical samples.

#ifndef TEXTREC_DATA_DATASETS_H_
#define TEXTREC_DATA_DATASETS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "textrec/common.h"
#include "textrec/imaging/synth.h"
#include "textrec/net/classifier.h"

namespace textrec {

// Style jitter band shared by the builders: scale, noise, brightness, and
// contrast vary per sample inside these limits.
struct JitterConfig {
  int scale_min = 2;
  int scale_max = 4;
  double noise_max = 0.05;
  double brightness_max = 0.06;
  double contrast_max = 0.12;
};

WordStyle SampleStyle(Rng& rng, const JitterConfig& jitter);

// `per_class` isolated renders of every alphabet symbol, resampled to
// patch_side and normalized. Labels are alphabet indices.
PatchDataset BuildCharDataset(const Alphabet& alphabet, int per_class,
                              uint64_t seed, int patch_side = 32,
                              const JitterConfig& jitter = {});

// Three-way segmentation-correction crops from existing word renders with
// character-span truth: label 0 = one whole character, 1 = a half-character
// fragment (over-segmented), 2 = two glued characters (under-segmented).
// Words shorter than two characters contribute no under-segmented crop.
PatchDataset DeriveCorrectionPatches(const std::vector<WordSample>& words,
                                     uint64_t seed, int patch_side = 32);

// Three-way segmentation-correction corpus from fresh multi-character
// renders; `per_class` three-character words, three crops each.
PatchDataset BuildCorrectionDataset(int per_class, uint64_t seed,
                                    int patch_side = 32,
                                    const JitterConfig& jitter = {});

// Binary word-vs-junk crops from existing renders: label 1 = the whole word,
// label 0 rotates over noise canvases, leading-fragment slivers, and
// two-word strips pasted from a second sample.
PatchDataset DeriveDetectPatches(const std::vector<WordSample>& words,
                                 uint64_t seed, int patch_side = 32);

// Binary word-vs-junk corpus from fresh renders, `per_class` of each label.
PatchDataset BuildDetectDataset(int per_class, uint64_t seed, int patch_side = 32,
                                const JitterConfig& jitter = {});

// Uniform random word over `charset` with length in [len_min, len_max].
std::string RandomWord(Rng& rng, int len_min, int len_max,
                       const std::string& charset = "abcdefghijklmnopqrstuvwxyz");

// `count` distinct random words.
std::vector<std::string> RandomWordList(int count, uint64_t seed, int len_min = 3,
                                        int len_max = 8);

// The targets plus `num_distractors` distinct words not in `targets`.
std::vector<std::string> LexiconWithDistractors(const std::vector<std::string>& targets,
                                                int num_distractors, uint64_t seed);

// Rendered words for embedded HMM training or word-level evaluation.
std::vector<WordSample> BuildWordSamples(const std::vector<std::string>& words,
                                         uint64_t seed,
                                         const JitterConfig& jitter = {});

// Multi-word lines (2 to 4 words each) for the line segmenter.
std::vector<LineSample> BuildLineSamples(int count, uint64_t seed,
                                         const JitterConfig& jitter = {});

struct SceneSuiteConfig {
  int width = 360;
  int height = 220;
  int words_min = 2;
  int words_max = 3;
  JitterConfig jitter;
};

// Scenes of non-overlapping words on a shaded background, with box/text
// ground truth. Placement retries until words fit without touching.
std::vector<SceneSample> BuildSceneSuite(int count, uint64_t seed,
                                         const SceneSuiteConfig& config = {});

// Text-line training material recovered from a scene: truth boxes are
// grouped into rows by vertical overlap, each row is cropped with `margin`
// pixels of context, and the member boxes become the unit spans.  The text
// field of the returned samples is left empty.
std::vector<WordSample> LinesFromScene(const GrayImage& img,
                                       const std::vector<TruthWord>& truth,
                                       int margin = 2);

}  // namespace textrec

#endif  // TEXTREC_DATA_DATASETS_H_
