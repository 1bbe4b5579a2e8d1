// src/detect.cc

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

#include "textrec/detect/detect.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "textrec/common.h"
#include "textrec/hmm/hmm.h"

namespace textrec {
namespace {

double MedianHeight(const std::vector<const Region*>& members) {
  std::vector<int> hs;
  hs.reserve(members.size());
  for (const Region* r : members) hs.push_back(r->box.h);
  std::sort(hs.begin(), hs.end());
  size_t n = hs.size();
  return n % 2 == 1 ? hs[n / 2] : 0.5 * (hs[n / 2 - 1] + hs[n / 2]);
}

// Horizontal gap between column extents; zero when they overlap.
double ColumnGap(const Box& a, const Box& b) {
  int gap = std::max(a.x, b.x) - std::min(a.x2(), b.x2());
  return gap > 0 ? gap : 0.0;
}

}  // namespace

std::vector<Box> ClusterLines(const std::vector<Region>& regions,
                              const LineClusterConfig& config) {
  if (regions.empty()) return {};
  const auto vertical_gap = [&](int i, int j) {
    const Box& a = regions[i].box;
    const Box& b = regions[j].box;
    const int gap = std::max(a.y, b.y) - std::min(a.y2(), b.y2());
    return gap <= 0 ? 0.0 : static_cast<double>(gap) / std::max(a.h, b.h);
  };
  const std::vector<int> pass1 =
      DbscanDistance(static_cast<int>(regions.size()), vertical_gap,
                     config.vertical_eps, config.min_pts);

  int num_groups = 0;
  for (int label : pass1) num_groups = std::max(num_groups, label + 1);
  std::vector<std::vector<const Region*>> groups(num_groups);
  for (size_t i = 0; i < regions.size(); ++i) {
    if (pass1[i] == kDbscanNoise) continue;
    groups[pass1[i]].push_back(&regions[i]);
  }

  std::vector<Box> lines;
  for (const auto& members : groups) {
    if (members.empty()) continue;
    const double eps = std::max(1.0, config.gap_heights * MedianHeight(members));
    const std::vector<int> pass2 = DbscanDistance(
        static_cast<int>(members.size()),
        [&](int a, int b) { return ColumnGap(members[a]->box, members[b]->box); },
        eps, 1);
    int num_lines = 0;
    for (int label : pass2) num_lines = std::max(num_lines, label + 1);
    std::vector<Box> line_of(static_cast<size_t>(num_lines));
    std::vector<bool> seen(static_cast<size_t>(num_lines), false);
    for (size_t i = 0; i < members.size(); ++i) {
      const int c = pass2[i];
      line_of[c] = seen[c] ? BoundingUnion(line_of[c], members[i]->box) : members[i]->box;
      seen[c] = true;
    }
    lines.insert(lines.end(), line_of.begin(), line_of.end());
  }
  std::sort(lines.begin(), lines.end(), [](const Box& a, const Box& b) {
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    if (a.w != b.w) return a.w < b.w;
    return a.h < b.h;
  });
  return lines;
}

std::vector<ColumnSpan> WordSpanFamily(const std::vector<RegionInterval>& segments) {
  std::vector<ColumnSpan> words;
  struct Gap {
    int left_word;  // index into `words` of the word to the left
    ColumnSpan span;
  };
  std::vector<Gap> gaps;     // interior separators only, one per word boundary
  bool pending_inter = false;
  ColumnSpan pending{};
  for (const RegionInterval& seg : segments) {
    if (seg.region_class != 0) {
      if (pending_inter) {
        pending.end = seg.span.end;
      } else {
        pending = seg.span;
        pending_inter = true;
      }
      continue;
    }
    if (pending_inter && !words.empty())
      gaps.push_back({static_cast<int>(words.size()) - 1, pending});
    pending_inter = false;
    words.push_back(seg.span);
  }
  if (words.empty()) return {};

  // Widest first; a tie goes to the leftmost so every stage is determined.
  std::sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) {
    if (a.span.Width() != b.span.Width()) return a.span.Width() > b.span.Width();
    return a.span.start < b.span.start;
  });

  std::set<std::pair<int, int>> pool;
  std::vector<bool> active(words.size(), false);  // split after word i when set
  for (size_t stage = 0; stage <= gaps.size(); ++stage) {
    if (stage > 0) active[gaps[stage - 1].left_word] = true;
    int run_start = words.front().start;
    for (size_t w = 0; w < words.size(); ++w) {
      const bool cut = active[w] || w + 1 == words.size();
      if (!cut) continue;
      pool.insert({run_start, words[w].end});
      if (w + 1 < words.size()) run_start = words[w + 1].start;
    }
  }

  std::vector<ColumnSpan> out;
  out.reserve(pool.size());
  for (const auto& [start, end] : pool) out.push_back({start, end});
  return out;
}

std::vector<ColumnSpan> LineToWords(const GrayImage& line_img,
                                    const Classifier& line_frame_net,
                                    const HmmModel& line_hmm) {
  const FrameSequence frames =
      ExtractFramesDefault(line_img, line_frame_net.spec().input_side);
  const auto emissions = FrameEmissions(line_frame_net, frames, line_hmm.prior);
  const ViterbiResult vit = HmmViterbi(emissions, line_hmm.transitions);
  const auto segments =
      PathToSegmentation(vit.path, line_hmm.transitions.topology, frames);
  return WordSpanFamily(segments);
}

std::vector<WordBox> WordDetectFilter(const std::vector<WordBox>& candidates,
                                      const DetectThresholds& thresholds) {
  std::vector<WordBox> kept;
  for (const WordBox& wb : candidates) {
    if (wb.p_text >= thresholds.tau_det && wb.cost_v >= thresholds.tau_v &&
        wb.edit_dist <= thresholds.tau_e) {
      kept.push_back(wb);
    }
  }
  return kept;
}

std::vector<WordBox> Nms(const std::vector<WordBox>& boxes, double overlap_frac) {
  std::vector<int> order(boxes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return boxes[a].cost_v > boxes[b].cost_v; });
  std::vector<WordBox> kept;
  for (int i : order) {
    const Box& b = boxes[i].box;
    bool suppressed = false;
    for (const WordBox& k : kept) {
      const double limit = overlap_frac * std::min(b.Area(), k.box.Area());
      if (static_cast<double>(IntersectionArea(b, k.box)) > limit) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(boxes[i]);
  }
  return kept;
}

std::vector<WordBox> RecognizeSceneCandidates(const GrayImage& img,
                                              const SceneModels& models,
                                              const SceneParams& params) {
  const auto regions = ExtractMsers(img, params.mser);
  const auto raw_lines = ClusterLines(regions, params.lines);

  std::vector<WordBox> candidates;
  for (const Box& raw : raw_lines) {
    const int pad = static_cast<int>(std::lround(params.line_pad_frac * raw.h));
    Box line;
    line.x = std::max(0, raw.x);
    line.y = std::max(0, raw.y - pad);
    line.w = std::min(img.width, raw.x2()) - line.x;
    line.h = std::min(img.height, raw.y2() + pad) - line.y;
    if (line.w < params.min_line_width || line.h < params.min_line_height) continue;

    const GrayImage line_img = img.Crop(line.x, line.y, line.w, line.h);
    std::vector<ColumnSpan> spans;
    try {
      spans = LineToWords(line_img, models.line_frame_net, models.line_hmm);
    } catch (const std::exception&) {
      continue;  // line narrower than a frame, or no admissible path
    }

    for (const ColumnSpan& span : spans) {
      if (span.Width() < 3) continue;
      const GrayImage word_img = line_img.Crop(span.start, 0, span.Width(), line.h);

      const Patch p = NormalizePatch(ResampleToPatch(
          word_img, models.detect_net.spec().input_side));
      const double p_text = models.detect_net.PredictPosteriors(p)[1];

      try {
        const RecognizedWord rw =
            RecognizeWord(word_img, models.word_rec, params.word_opts);
        WordBox wb;
        wb.box = Box{line.x + span.start, line.y, span.Width(), line.h};
        wb.transcript = rw.transcript;
        wb.log_cost = rw.diagnostics.log_cost;
        wb.cost_v = rw.diagnostics.cost_v;
        wb.edit_dist = rw.diagnostics.edit_dist;
        wb.p_text = p_text;
        candidates.push_back(std::move(wb));
      } catch (const std::exception&) {
        // Undecodable crop (blank, or the cascade has no start interval).
      }
    }
  }
  return candidates;
}

std::vector<WordBox> RecognizeScene(const GrayImage& img, const SceneModels& models,
                                    const SceneParams& params) {
  return Nms(WordDetectFilter(RecognizeSceneCandidates(img, models, params),
                              params.thresholds),
             params.nms_overlap);
}

EvalReport EvaluateEndToEnd(const std::vector<WordBox>& preds,
                            const std::vector<TruthWord>& truth, OverlapRule rule,
                            bool case_sensitive) {
  EvalReport report;
  report.num_preds = static_cast<int>(preds.size());
  report.num_truth = static_cast<int>(truth.size());

  struct Pair {
    long long inter;
    int pred, tr;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < report.num_preds; ++i)
    for (int j = 0; j < report.num_truth; ++j) {
      const long long inter = IntersectionArea(preds[i].box, truth[j].box);
      if (inter > 0) pairs.push_back({inter, i, j});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.inter != b.inter) return a.inter > b.inter;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.tr < b.tr;
  });

  std::vector<bool> pred_used(preds.size(), false), truth_used(truth.size(), false);
  for (const Pair& p : pairs) {
    if (pred_used[p.pred] || truth_used[p.tr]) continue;
    pred_used[p.pred] = true;
    truth_used[p.tr] = true;

    const Box& pb = preds[p.pred].box;
    const Box& tb = truth[p.tr].box;
    bool overlap_ok = false;
    if (rule == OverlapRule::kUnionBox) {
      overlap_ok = static_cast<double>(p.inter) >
                   0.5 * static_cast<double>(BoundingUnion(pb, tb).Area());
    } else {
      overlap_ok = Iou(pb, tb) > 0.5;
    }
    if (!overlap_ok) continue;

    const std::string& a = preds[p.pred].transcript;
    const std::string& b = truth[p.tr].text;
    const bool text_ok =
        case_sensitive ? a == b : CollapseString(a) == CollapseString(b);
    if (text_ok) ++report.hits;
  }

  if (report.num_preds > 0)
    report.precision = static_cast<double>(report.hits) / report.num_preds;
  if (report.num_truth > 0)
    report.recall = static_cast<double>(report.hits) / report.num_truth;
  if (report.precision + report.recall > 0.0)
    report.f1 = 2.0 * report.precision * report.recall /
                (report.precision + report.recall);
  return report;
}

}  // namespace textrec
