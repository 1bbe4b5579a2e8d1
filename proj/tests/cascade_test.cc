// tests/cascade_test.cc

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

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "testutil.h"
#include "textrec/cascade/cascade.h"
#include "textrec/imaging/frames.h"
#include "textrec/imaging/synth.h"
#include "textrec/net/presets.h"

using namespace textrec;

namespace {

IntervalScorer TableScorer(std::map<std::pair<int, int>, double> table,
                           double fallback = 0.25) {
  return [table = std::move(table), fallback](int start, int end) {
    const auto it = table.find({start, end});
    return it == table.end() ? fallback : it->second;
  };
}

Classifier ZeroedCorrectionNet() {
  Classifier net(CorrectionNetDesk());
  for (ParamBlock* block : net.network().Blocks())
    std::fill(block->value.begin(), block->value.end(), 0.0);
  return net;
}

}  // namespace

TEST_CASE("CharacterIntervals absorbs separators at their midpoints") {
  const std::vector<RegionInterval> segments = {
      {0, {0, 10}},
      {1, {10, 14}},
      {0, {14, 20}},
  };
  const auto intervals = CharacterIntervals(segments);
  REQUIRE(intervals.size() == 2);
  CHECK(intervals[0].start == 0);
  CHECK(intervals[0].end == 12);
  CHECK(intervals[1].start == 12);
  CHECK(intervals[1].end == 20);
  CHECK(intervals[0].origin == IntervalOrigin::kHmm);
}

TEST_CASE("CharacterIntervals absorbs leading and trailing separators whole") {
  const std::vector<RegionInterval> segments = {
      {1, {0, 4}},
      {0, {4, 10}},
      {1, {10, 16}},
  };
  const auto intervals = CharacterIntervals(segments);
  REQUIRE(intervals.size() == 1);
  CHECK(intervals[0].start == 0);
  CHECK(intervals[0].end == 16);
}

TEST_CASE("CharacterIntervals with no character region is empty") {
  const std::vector<RegionInterval> segments = {{1, {0, 8}}};
  CHECK(CharacterIntervals(segments).empty());
}

TEST_CASE("MergeOversegmented adds the union only when it beats both sides") {
  const std::vector<Interval> input = {
      {0, 5, IntervalOrigin::kHmm, 0.4},
      {5, 9, IntervalOrigin::kHmm, 0.5},
  };

  SUBCASE("winning join is added with the union span") {
    const auto out =
        MergeOversegmented(input, TableScorer({{{0, 9}, 0.9}}));
    REQUIRE(out.size() == 3);
    CHECK(out[0].start == 0);
    CHECK(out[0].end == 5);
    CHECK(out[1].start == 5);
    CHECK(out[1].end == 9);
    CHECK(out[2].start == 0);
    CHECK(out[2].end == 9);
    CHECK(out[2].origin == IntervalOrigin::kMerged);
    CHECK(out[2].p_correct == doctest::Approx(0.9));
  }

  SUBCASE("losing join adds nothing") {
    const auto out =
        MergeOversegmented(input, TableScorer({{{0, 9}, 0.3}}));
    CHECK(out.size() == 2);
  }

  SUBCASE("a tie is not an improvement") {
    const auto out =
        MergeOversegmented(input, TableScorer({{{0, 9}, 0.5}}));
    CHECK(out.size() == 2);
  }
}

TEST_CASE("MergeOversegmented is a single pass over the original adjacency") {
  const std::vector<Interval> input = {
      {0, 4, IntervalOrigin::kHmm, 0.1},
      {4, 8, IntervalOrigin::kHmm, 0.1},
      {8, 12, IntervalOrigin::kHmm, 0.1},
  };
  // Every union scores high, including the triple; only pairwise unions of
  // the input may appear.
  const auto out = MergeOversegmented(input, TableScorer({}, 0.99));
  REQUIRE(out.size() == 5);
  std::set<std::pair<int, int>> spans;
  for (const Interval& iv : out) spans.insert({iv.start, iv.end});
  CHECK(spans.count({0, 8}) == 1);
  CHECK(spans.count({4, 12}) == 1);
  CHECK(spans.count({0, 12}) == 0);
}

TEST_CASE("SplitUndersegmented halves at the floor midpoint and keeps originals") {
  const std::vector<Interval> input = {{0, 10, IntervalOrigin::kHmm, 0.6}};
  const auto out = SplitUndersegmented(input, TableScorer({{{0, 5}, 0.7},
                                                           {{5, 10}, 0.2}}));
  REQUIRE(out.size() == 3);
  CHECK(out[0].start == 0);
  CHECK(out[0].end == 10);
  CHECK(out[1].start == 0);
  CHECK(out[1].end == 5);
  CHECK(out[1].origin == IntervalOrigin::kSplitLeft);
  CHECK(out[1].p_correct == doctest::Approx(0.7));
  CHECK(out[2].start == 5);
  CHECK(out[2].end == 10);
  CHECK(out[2].origin == IntervalOrigin::kSplitRight);
  CHECK(out[2].p_correct == doctest::Approx(0.2));
}

TEST_CASE("SplitUndersegmented leaves width-1 intervals alone") {
  const std::vector<Interval> input = {{3, 4, IntervalOrigin::kHmm, 0.5}};
  CHECK(SplitUndersegmented(input, TableScorer({})).size() == 1);
}

TEST_CASE("SplitUndersegmented triples the count when everything is splittable") {
  std::vector<Interval> input;
  for (int i = 0; i < 6; ++i)
    input.push_back({i * 7, (i + 1) * 7, IntervalOrigin::kHmm, 0.5});
  CHECK(SplitUndersegmented(input, TableScorer({})).size() == 18);
  // Odd widths cut at the floor midpoint.
  const auto odd = SplitUndersegmented({{0, 7, IntervalOrigin::kHmm, 0.5}},
                                       TableScorer({}));
  CHECK(odd[1].end == 3);
  CHECK(odd[2].start == 3);
}

TEST_CASE("DeduplicateIntervals keeps the best score per span and sorts") {
  std::vector<Interval> input = {
      {5, 9, IntervalOrigin::kHmm, 0.2},
      {0, 5, IntervalOrigin::kSplitLeft, 0.3},
      {0, 5, IntervalOrigin::kHmm, 0.8},
      {0, 9, IntervalOrigin::kMerged, 0.4},
  };
  const auto out = DeduplicateIntervals(input);
  REQUIRE(out.size() == 3);
  CHECK(out[0].start == 0);
  CHECK(out[0].end == 5);
  CHECK(out[0].p_correct == doctest::Approx(0.8));
  CHECK(out[1].start == 0);
  CHECK(out[1].end == 9);
  CHECK(out[2].start == 5);
  CHECK(out[2].end == 9);
}

TEST_CASE("BuildCascadeGraph: one full-width interval is start and end") {
  const CascadeGraph g =
      BuildCascadeGraph({{0, 20, IntervalOrigin::kHmm, 0.9}}, 20);
  CHECK(g.V() == 1);
  CHECK(g.start_set == std::vector<int>{0});
  CHECK(g.end_set == std::vector<int>{0});
  CHECK(g.predecessors[0].empty());
  CHECK(g.is_start[0]);
  CHECK(g.is_end[0]);
}

TEST_CASE("BuildCascadeGraph errors on degenerate interval sets") {
  CHECK_THROWS_AS(BuildCascadeGraph({}, 20), std::runtime_error);
  // No interval begins at column zero.
  CHECK_THROWS_AS(
      BuildCascadeGraph({{3, 10, IntervalOrigin::kHmm, 0.5},
                         {10, 20, IntervalOrigin::kHmm, 0.5}},
                        20),
      std::runtime_error);
  // Nothing reaches the right edge.
  CHECK_THROWS_AS(
      BuildCascadeGraph({{0, 10, IntervalOrigin::kHmm, 0.5}}, 20),
      std::runtime_error);
}

TEST_CASE("BuildCascadeGraph wires seams within the gap tolerance only") {
  const std::vector<Interval> intervals = {
      {0, 10, IntervalOrigin::kHmm, 0.5},
      {12, 20, IntervalOrigin::kHmm, 0.5},  // seam gap 2: kept
      {13, 20, IntervalOrigin::kHmm, 0.5},  // seam gap 3: unreachable
  };
  const CascadeGraph g = BuildCascadeGraph(intervals, 20, 2);
  REQUIRE(g.V() == 2);
  CHECK(g.intervals[1].start == 12);
  CHECK(g.predecessors[1] == std::vector<int>{0});
  CHECK(g.end_set == std::vector<int>{1});
}

TEST_CASE("BuildCascadeGraph never wires an edge backwards or onto itself") {
  Rng rng(211);
  const Alphabet alphabet("abc");
  for (int trial = 0; trial < 50; ++trial) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, alphabet);
    const CascadeGraph& g = inst.graph;
    int max_in = 0;
    for (int v = 0; v < g.V(); ++v) {
      max_in = std::max(max_in, static_cast<int>(g.predecessors[v].size()));
      for (int u : g.predecessors[v]) {
        CHECK(g.intervals[u].start < g.intervals[v].start);
        CHECK(std::abs(g.intervals[u].end - g.intervals[v].start) <= g.gap_tol);
      }
      if (!g.is_start[v]) CHECK(!g.predecessors[v].empty());
    }
    CHECK(max_in <= 8);

    // Every start-to-end path tiles the width within the tolerance.
    const auto paths = testutil::AllPaths(g);
    CHECK(!paths.empty());
    for (const auto& path : paths) {
      CHECK(g.intervals[path.front()].start <= g.gap_tol);
      CHECK(std::abs(g.intervals[path.back()].end - g.width) <= g.gap_tol);
    }

    // Rebuilding from the deduplicated set is the identity.
    const CascadeGraph again = BuildCascadeGraph(g.intervals, g.width, g.gap_tol);
    REQUIRE(again.V() == g.V());
    for (int v = 0; v < g.V(); ++v) {
      CHECK(again.intervals[v].start == g.intervals[v].start);
      CHECK(again.intervals[v].end == g.intervals[v].end);
      CHECK(again.predecessors[v] == g.predecessors[v]);
    }
    CHECK(again.start_set == g.start_set);
    CHECK(again.end_set == g.end_set);
  }
}

TEST_CASE("ScoreInterval is uniform for a zeroed net and deterministic") {
  const Classifier net = ZeroedCorrectionNet();
  const WordSample ws = RenderWord("ab", WordStyle{}, 17);
  const double p = ScoreInterval(ws.image, 0, ws.image.width / 2, net);
  CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(ScoreInterval(ws.image, 0, ws.image.width / 2, net) == p);

  const IntervalScorer scorer = MakeNetScorer(ws.image, net);
  CHECK(scorer(2, 9) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("BuildWordCascade produces a decodable lattice from a segmentation") {
  const Classifier net = ZeroedCorrectionNet();
  const WordSample ws = RenderWord("abc", WordStyle{}, 19);
  const int w = ws.image.width;
  // A plausible segmentation: three characters with two separators.
  const int third = w / 3;
  const std::vector<RegionInterval> segments = {
      {0, {0, third - 2}},
      {1, {third - 2, third + 2}},
      {0, {third + 2, 2 * third - 2}},
      {1, {2 * third - 2, 2 * third + 2}},
      {0, {2 * third + 2, w}},
  };
  const CascadeGraph g = BuildWordCascade(ws.image, segments, net);
  CHECK(g.width == w);
  CHECK(!g.start_set.empty());
  CHECK(!g.end_set.empty());
  // Zeroed net: no merge can strictly win, so origins are HMM and splits.
  for (const Interval& iv : g.intervals) {
    CHECK(iv.origin != IntervalOrigin::kMerged);
    CHECK(iv.p_correct == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }
  // Three characters, each split once: six halves plus three originals.
  CHECK(g.V() == 9);
}

TEST_CASE("CascadeToJson carries intervals, edges, and the boundary sets") {
  Rng rng(223);
  const Alphabet alphabet("ab");
  const testutil::CascadeInstance inst = testutil::RandomCascade(rng, alphabet);
  const nlohmann::json j = CascadeToJson(inst.graph);
  REQUIRE(j.contains("intervals"));
  REQUIRE(j.contains("edges"));
  REQUIRE(j.contains("start_set"));
  REQUIRE(j.contains("end_set"));
  CHECK(j["width"] == inst.graph.width);
  CHECK(static_cast<int>(j["intervals"].size()) == inst.graph.V());
  const auto& first = j["intervals"][0];
  CHECK(first.contains("start"));
  CHECK(first.contains("end"));
  CHECK(first.contains("origin"));
  CHECK(first.contains("p_correct"));
  size_t edge_count = 0;
  for (const auto& preds : inst.graph.predecessors) edge_count += preds.size();
  CHECK(j["edges"].size() == edge_count);
}
