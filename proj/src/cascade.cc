// src/cascade.cc

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

#include "textrec/cascade/cascade.h"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace textrec {

std::string IntervalOriginName(IntervalOrigin origin) {
  switch (origin) {
    case IntervalOrigin::kHmm: return "hmm";
    case IntervalOrigin::kMerged: return "merged";
    case IntervalOrigin::kSplitLeft: return "split-left";
    case IntervalOrigin::kSplitRight: return "split-right";
  }
  return "?";
}

double ScoreInterval(const GrayImage& img, int start, int end,
                     const Classifier& correction_net) {
  if (start < 0 || end > img.width || start >= end)
    throw std::invalid_argument("ScoreInterval: bad span [" +
                                std::to_string(start) + ", " +
                                std::to_string(end) + ")");
  const Patch p = NormalizePatch(ResampleToPatch(
      img, start, 0, end - start, img.height, correction_net.spec().input_side));
  return correction_net.PredictPosteriors(p)[0];
}

IntervalScorer MakeNetScorer(const GrayImage& img, const Classifier& correction_net) {
  return [&img, &correction_net](int start, int end) {
    return ScoreInterval(img, start, end, correction_net);
  };
}

std::vector<Interval> CharacterIntervals(const std::vector<RegionInterval>& segments,
                                         int char_region_class) {
  std::vector<Interval> out;
  for (size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].region_class != char_region_class) continue;
    int start = segments[i].span.start;
    int end = segments[i].span.end;
    if (i > 0 && segments[i - 1].region_class != char_region_class) {
      const ColumnSpan& sep = segments[i - 1].span;
      // Leading separator absorbed whole; interior split at its midpoint.
      const bool leading = i == 1;
      start = leading ? sep.start : (sep.start + sep.end) / 2;
    }
    if (i + 1 < segments.size() &&
        segments[i + 1].region_class != char_region_class) {
      const ColumnSpan& sep = segments[i + 1].span;
      const bool trailing = i + 2 == segments.size();
      end = trailing ? sep.end : (sep.start + sep.end) / 2;
    }
    out.push_back(Interval{start, end, IntervalOrigin::kHmm, 0.0});
  }
  return out;
}

std::vector<Interval> MergeOversegmented(const std::vector<Interval>& intervals,
                                         const IntervalScorer& scorer) {
  std::vector<Interval> out = intervals;
  for (size_t i = 0; i + 1 < intervals.size(); ++i) {
    const Interval& a = intervals[i];
    const Interval& b = intervals[i + 1];
    const double joined = scorer(a.start, b.end);
    if (joined > a.p_correct && joined > b.p_correct)
      out.push_back(Interval{a.start, b.end, IntervalOrigin::kMerged, joined});
  }
  return out;
}

std::vector<Interval> SplitUndersegmented(const std::vector<Interval>& intervals,
                                          const IntervalScorer& scorer) {
  std::vector<Interval> out = intervals;
  for (const Interval& v : intervals) {
    if (v.Width() < 2) continue;
    const int mid = (v.start + v.end) / 2;
    out.push_back(Interval{v.start, mid, IntervalOrigin::kSplitLeft,
                           scorer(v.start, mid)});
    out.push_back(Interval{mid, v.end, IntervalOrigin::kSplitRight,
                           scorer(mid, v.end)});
  }
  return out;
}

std::vector<Interval> DeduplicateIntervals(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.end != b.end) return a.end < b.end;
              return a.p_correct > b.p_correct;
            });
  std::vector<Interval> out;
  for (const Interval& v : intervals) {
    if (!out.empty() && out.back().start == v.start && out.back().end == v.end)
      continue;  // sorted so the first copy carries the max p_correct
    out.push_back(v);
  }
  return out;
}

CascadeGraph BuildCascadeGraph(std::vector<Interval> intervals, int width,
                               int gap_tol) {
  if (intervals.empty())
    throw std::runtime_error("cascade: empty interval set");
  for (const Interval& v : intervals)
    if (v.start >= v.end)
      throw std::invalid_argument("cascade: degenerate interval [" +
                                  std::to_string(v.start) + ", " +
                                  std::to_string(v.end) + ")");
  std::vector<Interval> sorted = DeduplicateIntervals(std::move(intervals));

  const int n = static_cast<int>(sorted.size());
  std::vector<std::vector<int>> preds(n);
  std::vector<std::vector<int>> succs(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (sorted[u].start >= sorted[v].start) continue;
      if (std::abs(sorted[u].end - sorted[v].start) <= gap_tol) {
        preds[v].push_back(u);
        succs[u].push_back(v);
      }
    }
  }

  std::vector<bool> reachable(n, false);
  std::vector<int> stack;
  for (int v = 0; v < n; ++v) {
    if (sorted[v].start <= gap_tol && !reachable[v]) {
      reachable[v] = true;
      stack.push_back(v);
    }
  }
  if (stack.empty()) throw std::runtime_error("cascade: no start interval");
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : succs[u]) {
      if (!reachable[v]) {
        reachable[v] = true;
        stack.push_back(v);
      }
    }
  }

  CascadeGraph g;
  g.width = width;
  g.gap_tol = gap_tol;
  std::vector<int> new_index(n, -1);
  for (int v = 0; v < n; ++v) {
    if (!reachable[v]) continue;
    new_index[v] = g.V();
    g.intervals.push_back(sorted[v]);
  }
  g.predecessors.resize(g.intervals.size());
  g.is_start.assign(g.intervals.size(), false);
  g.is_end.assign(g.intervals.size(), false);
  for (int v = 0; v < n; ++v) {
    if (new_index[v] < 0) continue;
    const int k = new_index[v];
    for (int u : preds[v])
      if (new_index[u] >= 0) g.predecessors[k].push_back(new_index[u]);
    if (sorted[v].start <= gap_tol) {
      g.is_start[k] = true;
      g.start_set.push_back(k);
    }
    if (std::abs(sorted[v].end - width) <= gap_tol) {
      g.is_end[k] = true;
      g.end_set.push_back(k);
    }
  }
  if (g.end_set.empty()) throw std::runtime_error("cascade: no end interval");
  return g;
}

CascadeGraph BuildWordCascade(const GrayImage& img,
                              const std::vector<RegionInterval>& segments,
                              const Classifier& correction_net, int gap_tol) {
  std::vector<Interval> chars = CharacterIntervals(segments);
  const IntervalScorer scorer = MakeNetScorer(img, correction_net);
  for (Interval& v : chars) v.p_correct = scorer(v.start, v.end);
  std::vector<Interval> merged = MergeOversegmented(chars, scorer);
  std::vector<Interval> split = SplitUndersegmented(merged, scorer);
  return BuildCascadeGraph(std::move(split), img.width, gap_tol);
}

nlohmann::json CascadeToJson(const CascadeGraph& g) {
  nlohmann::json intervals = nlohmann::json::array();
  for (const Interval& v : g.intervals)
    intervals.push_back(nlohmann::json{{"start", v.start},
                                       {"end", v.end},
                                       {"origin", IntervalOriginName(v.origin)},
                                       {"p_correct", v.p_correct}});
  nlohmann::json edges = nlohmann::json::array();
  for (int v = 0; v < g.V(); ++v)
    for (int u : g.predecessors[v]) edges.push_back(nlohmann::json{u, v});
  return nlohmann::json{{"width", g.width},     {"gap_tol", g.gap_tol},
                        {"intervals", intervals}, {"edges", edges},
                        {"start_set", g.start_set}, {"end_set", g.end_set}};
}

}  // namespace textrec
