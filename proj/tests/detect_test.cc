// tests/detect_test.cc

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

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "testutil.h"
#include "textrec/detect/detect.h"
#include "textrec/imaging/synth.h"

using namespace textrec;

namespace {

WordStyle CleanStyle() {
  WordStyle style;
  style.noise_sigma = 0.0;
  style.brightness_jitter = 0.0;
  style.contrast_jitter = 0.0;
  style.jitter_x = 0;
  return style;
}

// Canonical signature of a region for polarity-symmetry comparisons.
using RegionKey = std::tuple<int, int, int, int, int, int>;
RegionKey KeyOf(const Region& r) {
  return {r.box.x, r.box.y, r.box.w, r.box.h, r.area, r.level};
}

void CheckRunsWellFormed(const Region& r) {
  long long total = 0;
  int min_x = 1 << 30, max_x = -1, min_y = 1 << 30, max_y = -1;
  for (size_t i = 0; i < r.runs.size(); ++i) {
    const PixelRun& run = r.runs[i];
    CHECK(run.len > 0);
    total += run.len;
    min_x = std::min(min_x, run.x);
    max_x = std::max(max_x, run.x + run.len - 1);
    min_y = std::min(min_y, run.y);
    max_y = std::max(max_y, run.y);
    if (i > 0) {
      const PixelRun& prev = r.runs[i - 1];
      const bool ordered = prev.y < run.y ||
                           (prev.y == run.y && prev.x + prev.len < run.x);
      // Sorted by (y, x) and maximal: runs on one row never touch.
      CHECK(ordered);
    }
  }
  CHECK(total == r.area);
  CHECK(min_x == r.box.x);
  CHECK(max_x == r.box.x2() - 1);
  CHECK(min_y == r.box.y);
  CHECK(max_y == r.box.y2() - 1);
}

WordBox MakeWordBox(Box b, double cost_v, double p_text = 1.0,
                    int edit_dist = 0) {
  WordBox wb;
  wb.box = b;
  wb.cost_v = cost_v;
  wb.p_text = p_text;
  wb.edit_dist = edit_dist;
  return wb;
}

Region RegionWithBox(Box b) {
  Region r;
  r.box = b;
  r.area = static_cast<int>(b.Area());
  return r;
}

}  // namespace

TEST_CASE("ExtractMsers: a uniform image yields nothing") {
  const GrayImage img(30, 30, 0.5);
  CHECK(ExtractMsers(img).empty());
}

TEST_CASE("ExtractMsers: one dark square, one region, exact box") {
  GrayImage img(30, 30, 1.0);
  for (int y = 7; y < 17; ++y)
    for (int x = 5; x < 15; ++x) img.At(x, y) = 0.0;
  const std::vector<Region> regions = ExtractMsers(img);
  REQUIRE(regions.size() == 1);
  const Region& r = regions[0];
  CHECK(r.box == Box{5, 7, 10, 10});
  CHECK(r.area == 100);
  CHECK_FALSE(r.bright_on_dark);
  CheckRunsWellFormed(r);
}

TEST_CASE("ExtractMsers: inversion swaps polarities exactly") {
  const WordSample ws = RenderWord("Energy", CleanStyle(), 401);
  // One 8-bit quantization round trip so inversion maps levels one-to-one.
  const GrayImage img = ReadPgm(WritePgm(ws.image));

  std::vector<RegionKey> dark, bright, inv_dark, inv_bright;
  for (const Region& r : ExtractMsers(img))
    (r.bright_on_dark ? bright : dark).push_back(KeyOf(r));
  for (const Region& r : ExtractMsers(InvertImage(img)))
    (r.bright_on_dark ? inv_bright : inv_dark).push_back(KeyOf(r));
  std::sort(dark.begin(), dark.end());
  std::sort(bright.begin(), bright.end());
  std::sort(inv_dark.begin(), inv_dark.end());
  std::sort(inv_bright.begin(), inv_bright.end());
  CHECK(dark == inv_bright);
  CHECK(bright == inv_dark);
}

TEST_CASE("ExtractMsers: glyph components of a clean word are recovered") {
  // Single-component glyphs only, so each letter is one extremal region.
  const WordSample ws = RenderWord("scan", CleanStyle(), 409);
  const std::vector<Region> regions = ExtractMsers(ws.image);
  for (const Region& r : regions) CheckRunsWellFormed(r);

  for (const ColumnSpan& span : ws.char_spans) {
    // Tight ink box inside this glyph's columns.
    int min_x = 1 << 30, max_x = -1, min_y = 1 << 30, max_y = -1;
    for (int y = 0; y < ws.image.height; ++y)
      for (int x = span.start; x < span.end; ++x)
        if (ws.image.At(x, y) < 0.5) {
          min_x = std::min(min_x, x);
          max_x = std::max(max_x, x);
          min_y = std::min(min_y, y);
          max_y = std::max(max_y, y);
        }
    REQUIRE(max_x >= 0);
    const Box ink{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
    double best = 0.0;
    for (const Region& r : regions)
      if (!r.bright_on_dark) best = std::max(best, Iou(r.box, ink));
    CHECK(best >= 0.5);
  }
}

TEST_CASE("DbscanDistance: two tight pairs and an outlier") {
  const std::vector<double> xs = {0.0, 1.0, 10.0, 11.0, 100.0};
  const auto dist = [&](int i, int j) { return std::abs(xs[i] - xs[j]); };
  const std::vector<int> labels = DbscanDistance(5, dist, 2.0, 2);
  CHECK(labels == std::vector<int>{0, 0, 1, 1, kDbscanNoise});
}

TEST_CASE("DbscanDistance: min_pts of one makes every point core") {
  const std::vector<double> xs = {0.0, 50.0, 100.0};
  const auto dist = [&](int i, int j) { return std::abs(xs[i] - xs[j]); };
  const std::vector<int> labels = DbscanDistance(3, dist, 1.0, 1);
  CHECK(labels == std::vector<int>{0, 1, 2});
}

TEST_CASE("DbscanDistance matches the brute-force oracle") {
  Rng rng(419);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::uniform_real_distribution<double> eps_dist(0.5, 2.0);
  std::uniform_int_distribution<int> n_dist(5, 120);
  std::uniform_int_distribution<int> pts_dist(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = n_dist(rng);
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    const auto dist = [&](int i, int j) {
      return std::hypot(pts[i].first - pts[j].first,
                        pts[i].second - pts[j].second);
    };
    const double eps = eps_dist(rng);
    const int min_pts = pts_dist(rng);

    const std::vector<int> got = DbscanDistance(n, dist, eps, min_pts);
    const testutil::DbscanOracle want =
        testutil::BruteDbscan(n, dist, eps, min_pts);
    CHECK(testutil::CanonicalLabels(got) ==
          testutil::CanonicalLabels(want.labels));
    for (int i = 0; i < n; ++i) {
      if (want.core[i]) CHECK(got[i] != kDbscanNoise);
      if (got[i] == kDbscanNoise) CHECK_FALSE(want.core[i]);
    }
  }
}

TEST_CASE("ClusterLines groups rows and splits on wide gaps") {
  SUBCASE("empty input") { CHECK(ClusterLines({}).empty()); }

  SUBCASE("one row of glyph boxes makes one line") {
    std::vector<Region> regions = {
        RegionWithBox({0, 10, 8, 10}),
        RegionWithBox({12, 10, 8, 10}),
        RegionWithBox({24, 10, 8, 11}),
    };
    const std::vector<Box> lines = ClusterLines(regions);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0] == Box{0, 10, 32, 11});
  }

  SUBCASE("two rows far apart make two lines") {
    std::vector<Region> regions = {
        RegionWithBox({0, 10, 8, 10}),
        RegionWithBox({12, 10, 8, 10}),
        RegionWithBox({0, 100, 8, 10}),
        RegionWithBox({12, 100, 8, 10}),
    };
    const std::vector<Box> lines = ClusterLines(regions);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == Box{0, 10, 20, 10});
    CHECK(lines[1] == Box{0, 100, 20, 10});
  }

  SUBCASE("a huge horizontal gap splits one row into two lines") {
    std::vector<Region> regions = {
        RegionWithBox({0, 10, 10, 10}),
        RegionWithBox({200, 10, 10, 10}),
    };
    const std::vector<Box> lines = ClusterLines(regions);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == Box{0, 10, 10, 10});
    CHECK(lines[1] == Box{200, 10, 10, 10});
  }

  SUBCASE("nearby rows of differing heights chain into one line") {
    std::vector<Region> regions = {
        RegionWithBox({0, 10, 8, 20}),   // tall glyph
        RegionWithBox({12, 15, 8, 10}),  // x-height glyph, overlaps rows
    };
    CHECK(ClusterLines(regions).size() == 1);
  }
}

TEST_CASE("WordSpanFamily pools every split stage") {
  const auto word = [](int a, int b) {
    return RegionInterval{0, {a, b}};
  };
  const auto sep = [](int a, int b) {
    return RegionInterval{1, {a, b}};
  };
  const auto spans_as_set = [](const std::vector<ColumnSpan>& spans) {
    std::set<std::pair<int, int>> s;
    for (const ColumnSpan& cs : spans) s.insert({cs.start, cs.end});
    return s;
  };

  SUBCASE("a single word span is returned as-is") {
    const auto fam = WordSpanFamily({word(0, 30)});
    CHECK(spans_as_set(fam) == std::set<std::pair<int, int>>{{0, 30}});
  }

  SUBCASE("no word segments yields nothing") {
    CHECK(WordSpanFamily({sep(0, 10)}).empty());
    CHECK(WordSpanFamily({}).empty());
  }

  SUBCASE("one separator offers the join and both words") {
    const auto fam = WordSpanFamily({word(0, 30), sep(30, 40), word(40, 70)});
    CHECK(spans_as_set(fam) ==
          std::set<std::pair<int, int>>{{0, 70}, {0, 30}, {40, 70}});
  }

  SUBCASE("gaps activate widest first") {
    const auto fam = WordSpanFamily({word(0, 30), sep(30, 50), word(50, 80),
                                     sep(80, 90), word(90, 120)});
    CHECK(spans_as_set(fam) ==
          std::set<std::pair<int, int>>{
              {0, 120}, {0, 30}, {50, 120}, {50, 80}, {90, 120}});
  }

  SUBCASE("equal-width gaps activate leftmost first") {
    const auto fam = WordSpanFamily({word(0, 20), sep(20, 30), word(30, 50),
                                     sep(50, 60), word(60, 80)});
    const auto got = spans_as_set(fam);
    CHECK(got == std::set<std::pair<int, int>>{
                     {0, 80}, {0, 20}, {30, 80}, {30, 50}, {60, 80}});
    CHECK(got.count({0, 50}) == 0);
  }

  SUBCASE("boundary separators are not gaps") {
    const auto fam =
        WordSpanFamily({sep(0, 5), word(5, 30), sep(30, 35)});
    CHECK(spans_as_set(fam) == std::set<std::pair<int, int>>{{5, 30}});
  }
}

TEST_CASE("WordDetectFilter applies all three thresholds") {
  std::vector<WordBox> cands = {
      MakeWordBox({0, 0, 10, 10}, -5.0, 0.9, 1),
      MakeWordBox({0, 0, 10, 10}, -5.0, 0.4, 1),   // p_text too low
      MakeWordBox({0, 0, 10, 10}, -50.0, 0.9, 1),  // cost_v too low
      MakeWordBox({0, 0, 10, 10}, -5.0, 0.9, 3),   // edit distance too high
  };
  DetectThresholds th;
  th.tau_det = 0.5;
  th.tau_v = -10.0;
  th.tau_e = 2;
  const auto kept = WordDetectFilter(cands, th);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].p_text == doctest::Approx(0.9));

  // Inclusive boundaries on all three thresholds.
  std::vector<WordBox> edge = {MakeWordBox({0, 0, 4, 4}, -10.0, 0.5, 2)};
  CHECK(WordDetectFilter(edge, th).size() == 1);
}

TEST_CASE("Nms keeps the higher-scored of two overlapping boxes") {
  std::vector<WordBox> boxes = {
      MakeWordBox({0, 0, 10, 10}, -3.0),
      MakeWordBox({1, 0, 10, 10}, -1.0),
      MakeWordBox({50, 50, 10, 10}, -9.0),
  };
  const auto kept = Nms(boxes, 0.30);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].cost_v == doctest::Approx(-1.0));
  CHECK(kept[0].box == Box{1, 0, 10, 10});
  CHECK(kept[1].box == Box{50, 50, 10, 10});
}

TEST_CASE("Nms overlap threshold is a strict fraction of the smaller area") {
  // Intersection is 30 of min-area 100: exactly at the 0.30 limit survives,
  // one column more is suppressed.
  std::vector<WordBox> at_limit = {
      MakeWordBox({0, 0, 10, 10}, -1.0),
      MakeWordBox({7, 0, 10, 10}, -2.0),  // intersection 3x10 = 30
  };
  CHECK(Nms(at_limit, 0.30).size() == 2);

  std::vector<WordBox> over_limit = {
      MakeWordBox({0, 0, 10, 10}, -1.0),
      MakeWordBox({6, 0, 10, 10}, -2.0),  // intersection 4x10 = 40
  };
  CHECK(Nms(over_limit, 0.30).size() == 1);
}

TEST_CASE("EvaluateEndToEnd scores hits, misses, and spurious boxes") {
  const std::vector<TruthWord> truth = {
      {{10, 10, 40, 12}, "cat"},
      {{10, 40, 40, 12}, "dog"},
  };

  SUBCASE("perfect predictions") {
    std::vector<WordBox> preds;
    preds.push_back(MakeWordBox({10, 10, 40, 12}, 0.0));
    preds.back().transcript = "cat";
    preds.push_back(MakeWordBox({10, 40, 40, 12}, 0.0));
    preds.back().transcript = "dog";
    const EvalReport rep = EvaluateEndToEnd(preds, truth);
    CHECK(rep.hits == 2);
    CHECK(rep.precision == doctest::Approx(1.0));
    CHECK(rep.recall == doctest::Approx(1.0));
    CHECK(rep.f1 == doctest::Approx(1.0));
  }

  SUBCASE("wrong transcript is a miss even with a perfect box") {
    std::vector<WordBox> preds;
    preds.push_back(MakeWordBox({10, 10, 40, 12}, 0.0));
    preds.back().transcript = "cut";
    const EvalReport rep = EvaluateEndToEnd(preds, truth);
    CHECK(rep.hits == 0);
    CHECK(rep.precision == doctest::Approx(0.0));
  }

  SUBCASE("matching is case-insensitive by default, strict on request") {
    std::vector<WordBox> preds;
    preds.push_back(MakeWordBox({10, 10, 40, 12}, 0.0));
    preds.back().transcript = "CAT";
    CHECK(EvaluateEndToEnd(preds, truth).hits == 1);
    CHECK(EvaluateEndToEnd(preds, truth, OverlapRule::kUnionBox,
                           /*case_sensitive=*/true)
              .hits == 0);
  }

  SUBCASE("each truth word is matched at most once") {
    std::vector<WordBox> preds;
    for (int i = 0; i < 2; ++i) {
      preds.push_back(MakeWordBox({10, 10, 40, 12}, 0.0));
      preds.back().transcript = "cat";
    }
    const EvalReport rep = EvaluateEndToEnd(preds, truth);
    CHECK(rep.hits == 1);
    CHECK(rep.precision == doctest::Approx(0.5));
    CHECK(rep.recall == doctest::Approx(0.5));
  }

  SUBCASE("empty predictions score zero precision") {
    const EvalReport rep = EvaluateEndToEnd({}, truth);
    CHECK(rep.precision == doctest::Approx(0.0));
    CHECK(rep.recall == doctest::Approx(0.0));
    CHECK(rep.f1 == doctest::Approx(0.0));
  }

  SUBCASE("empty truth scores zero recall") {
    std::vector<WordBox> preds;
    preds.push_back(MakeWordBox({10, 10, 40, 12}, 0.0));
    preds.back().transcript = "cat";
    const EvalReport rep = EvaluateEndToEnd(preds, {});
    CHECK(rep.hits == 0);
    CHECK(rep.recall == doctest::Approx(0.0));
  }
}

TEST_CASE("EvaluateEndToEnd overlap rules differ on diagonal offsets") {
  // Equal 100x100 squares offset by (18, 18): IoU is 0.507 but the
  // intersection is under half the bounding-union area.
  const std::vector<TruthWord> truth = {{{18, 18, 100, 100}, "x"}};
  std::vector<WordBox> preds;
  preds.push_back(MakeWordBox({0, 0, 100, 100}, 0.0));
  preds.back().transcript = "x";
  CHECK(EvaluateEndToEnd(preds, truth, OverlapRule::kIou).hits == 1);
  CHECK(EvaluateEndToEnd(preds, truth, OverlapRule::kUnionBox).hits == 0);
}
