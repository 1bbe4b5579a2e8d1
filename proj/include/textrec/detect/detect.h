// textrec/detect/detect.h

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

// Scene-level pipeline: region candidates -> text lines -> word candidates
// -> per-word recognition -> filtering, suppression, and evaluation.

#ifndef TEXTREC_DETECT_DETECT_H_
#define TEXTREC_DETECT_DETECT_H_

#include <limits>
#include <string>
#include <vector>

#include "textrec/decode/decoder.h"
#include "textrec/detect/dbscan.h"
#include "textrec/detect/mser.h"
#include "textrec/imaging/synth.h"

namespace textrec {

struct LineClusterConfig {
  // Pass 1 groups regions by vertical placement. Distance is the vertical
  // gap between two row extents in units of the taller box, so glyphs of
  // one line (which overlap vertically, distance 0) chain together no
  // matter how their heights differ.
  double vertical_eps = 0.35;
  // Pass 2 splits each group where the horizontal gap between consecutive
  // boxes exceeds gap_heights * median height.
  double gap_heights = 1.6;
  int min_pts = 1;
};

// Candidate text-line boxes from clustered regions.  Two DBSCAN passes: a
// vertical-placement pass, then a horizontal-gap pass within each cluster.
std::vector<Box> ClusterLines(const std::vector<Region>& regions,
                              const LineClusterConfig& config = {});

// Pooled span family for a segmented line.  Stage 0 bridges every separator;
// each later stage activates the widest remaining gap (ties leftmost) and the
// resulting word runs join the pool, so single words and full splits are all
// offered as candidates.
std::vector<ColumnSpan> WordSpanFamily(const std::vector<RegionInterval>& segments);

// Word spans (columns, line-local) from the line HMM's segmentation.  Gaps
// are introduced largest-first; every stage's spans join the candidate pool.
std::vector<ColumnSpan> LineToWords(const GrayImage& line_img,
                                    const Classifier& line_frame_net,
                                    const HmmModel& line_hmm);

struct WordBox {
  Box box;
  std::string transcript;
  double log_cost = 0.0;
  double cost_v = 0.0;
  int edit_dist = 0;
  double p_text = 0.0;  // detection net posterior for "text"
};

struct DetectThresholds {
  double tau_det = 0.5;
  double tau_v = -std::numeric_limits<double>::infinity();
  int tau_e = std::numeric_limits<int>::max();
};

// Keeps boxes with p_text >= tau_det, cost_v >= tau_v, edit_dist <= tau_e.
std::vector<WordBox> WordDetectFilter(const std::vector<WordBox>& candidates,
                                      const DetectThresholds& thresholds);

// Greedy non-max suppression by cost_v; a box is dropped when its
// intersection with any kept box exceeds overlap_frac * min(box areas).
std::vector<WordBox> Nms(const std::vector<WordBox>& boxes,
                         double overlap_frac = 0.30);

struct SceneModels {
  Classifier line_frame_net;  // word/inter-word topology states
  HmmModel line_hmm;
  Classifier detect_net;      // {background, text}
  WordRecognizer word_rec;
};

struct SceneParams {
  MserParams mser;
  LineClusterConfig lines;
  RecognizeOptions word_opts;
  DetectThresholds thresholds;
  double nms_overlap = 0.30;
  int min_line_width = 8;
  int min_line_height = 5;
  double line_pad_frac = 0.18;  // vertical margin added around line boxes
};

// Everything scored, before thresholding and NMS; the PR sweep refilters
// this list.  Word candidates that fail to decode are skipped.
std::vector<WordBox> RecognizeSceneCandidates(const GrayImage& img,
                                              const SceneModels& models,
                                              const SceneParams& params);

// Candidates -> threshold filter -> NMS.
std::vector<WordBox> RecognizeScene(const GrayImage& img, const SceneModels& models,
                                    const SceneParams& params);

enum class OverlapRule { kUnionBox, kIou };

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int hits = 0;
  int num_preds = 0;
  int num_truth = 0;
};

// Greedy one-to-one matching by descending intersection area.  A matched
// pair is a hit when the intersection exceeds half the reference area
// (bounding box of the union, or IoU > 0.5 under kIou) and the transcript
// matches exactly.  Empty predictions score precision 0 by convention.
EvalReport EvaluateEndToEnd(const std::vector<WordBox>& preds,
                            const std::vector<TruthWord>& truth,
                            OverlapRule rule = OverlapRule::kUnionBox,
                            bool case_sensitive = false);

}  // namespace textrec

#endif  // TEXTREC_DETECT_DETECT_H_
