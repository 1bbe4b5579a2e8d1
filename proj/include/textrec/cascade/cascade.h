// textrec/cascade/cascade.h

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

// Candidate character intervals and their precedence graph.  The HMM
// segmentation seeds the interval set; a merge pass patches over-segmented
// characters, a split pass patches under-segmented ones, and the graph wires
// intervals whose boundaries abut within a small tolerance.

#ifndef TEXTREC_CASCADE_CASCADE_H_
#define TEXTREC_CASCADE_CASCADE_H_

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "textrec/imaging/frames.h"
#include "textrec/imaging/image.h"
#include "textrec/net/classifier.h"

namespace textrec {

inline constexpr int kDefaultGapTol = 2;

enum class IntervalOrigin { kHmm, kMerged, kSplitLeft, kSplitRight };

std::string IntervalOriginName(IntervalOrigin origin);

struct Interval {
  int start = 0;
  int end = 0;
  IntervalOrigin origin = IntervalOrigin::kHmm;
  double p_correct = 0.0;

  int Width() const { return end - start; }
};

// Scores a column span of the source image; returns p(correct segment).
using IntervalScorer = std::function<double(int start, int end)>;

// p_correct for one slice via the 3-class correction net; label 0 is
// "correct segment".  The slice is resampled and normalized like any patch.
double ScoreInterval(const GrayImage& img, int start, int end,
                     const Classifier& correction_net);

IntervalScorer MakeNetScorer(const GrayImage& img, const Classifier& correction_net);

// Character candidate intervals from an HMM segmentation.  Separator regions
// are absorbed: an interior separator donates its left half to the character
// on its left and its right half to the one on its right; leading and
// trailing separators are absorbed whole.  Empty if no character region.
std::vector<Interval> CharacterIntervals(const std::vector<RegionInterval>& segments,
                                         int char_region_class = 0);

// One left-to-right pass over adjacent pairs; the pair's union is added when
// it outscores both constituents.  Constituents are always retained.
std::vector<Interval> MergeOversegmented(const std::vector<Interval>& intervals,
                                         const IntervalScorer& scorer);

// Adds both halves of every interval of width >= 2 (midpoint floor);
// originals retained.
std::vector<Interval> SplitUndersegmented(const std::vector<Interval>& intervals,
                                          const IntervalScorer& scorer);

// Collapses identical spans keeping the max p_correct, sorts by (start, end).
std::vector<Interval> DeduplicateIntervals(std::vector<Interval> intervals);

struct CascadeGraph {
  std::vector<Interval> intervals;            // sorted by (start, end)
  std::vector<std::vector<int>> predecessors; // N(v_k), ascending indices
  std::vector<int> start_set;                 // indices, ascending
  std::vector<int> end_set;
  std::vector<bool> is_start;
  std::vector<bool> is_end;
  int width = 0;
  int gap_tol = kDefaultGapTol;

  int V() const { return static_cast<int>(intervals.size()); }
};

// Dedups, sorts, wires edges u->v where |u.end - v.start| <= gap_tol and
// u.start < v.start, then drops intervals unreachable from the start set.
// Throws std::runtime_error when the interval set is empty or either the
// start or end set comes out empty (upstream segmentation failure).
CascadeGraph BuildCascadeGraph(std::vector<Interval> intervals, int width,
                               int gap_tol = kDefaultGapTol);

// Full candidate construction for one word image: segmentation -> character
// intervals -> score -> merge -> split -> graph.
CascadeGraph BuildWordCascade(const GrayImage& img,
                              const std::vector<RegionInterval>& segments,
                              const Classifier& correction_net,
                              int gap_tol = kDefaultGapTol);

// Debug dump consumed by the CLI: intervals, scores, edges, start/end sets.
nlohmann::json CascadeToJson(const CascadeGraph& graph);

}  // namespace textrec

#endif  // TEXTREC_CASCADE_CASCADE_H_
