// tests/decoder_test.cc

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

#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "testutil.h"
#include "textrec/data/datasets.h"
#include "textrec/decode/decoder.h"
#include "textrec/lm/ngram.h"

using namespace textrec;

namespace {

// A fixed emission alphabet for synthetic instances; must outlive the tables.
const Alphabet& TestAlphabet() {
  static const Alphabet alphabet("abcdef");
  return alphabet;
}

EmissionTable ManualEmissions(const Alphabet& alphabet,
                              const std::vector<std::vector<double>>& char_probs,
                              const std::vector<double>& pv) {
  EmissionTable emis;
  emis.alphabet = &alphabet;
  for (const auto& row : char_probs) {
    std::vector<double> logs(row.size());
    for (size_t i = 0; i < row.size(); ++i) logs[i] = std::log(row[i]);
    emis.log_char.push_back(std::move(logs));
  }
  for (double p : pv) emis.log_pv.push_back(std::log(p));
  return emis;
}

CascadeGraph Chain(const std::vector<int>& cuts, int width) {
  std::vector<Interval> intervals;
  int prev = 0;
  for (int cut : cuts) {
    intervals.push_back({prev, cut, IntervalOrigin::kHmm, 1.0});
    prev = cut;
  }
  intervals.push_back({prev, width, IntervalOrigin::kHmm, 1.0});
  return BuildCascadeGraph(intervals, width);
}

NGramModel NearUniformLm() {
  // Enormous alpha drowns the counts, so every conditional is 1/62 up to
  // rounding; the argmax must then coincide with the no-LM decode.
  const Lexicon lex({"ab"}, true);
  return NGramModel(lex, 2, /*alpha=*/1e12, /*lambda=*/0.9);
}

}  // namespace

TEST_CASE("HypothesisBetter orders by cost, then length, then spelling") {
  const Hypothesis high{"zz", -1.0, -1.0, {0, 1}};
  const Hypothesis low{"aa", -2.0, -2.0, {0, 1}};
  CHECK(HypothesisBetter(high, low));
  CHECK_FALSE(HypothesisBetter(low, high));

  const Hypothesis shorter{"ab", -1.0, -1.0, {0, 1}};
  const Hypothesis longer{"abc", -1.0, -1.0, {0, 1, 2}};
  CHECK(HypothesisBetter(shorter, longer));

  const Hypothesis alpha{"ab", -1.0, -1.0, {0, 1}};
  const Hypothesis beta{"ba", -1.0, -1.0, {0, 1}};
  CHECK(HypothesisBetter(alpha, beta));
}

TEST_CASE("DecodeExactNoLm: single interval picks the argmax character") {
  const Alphabet alphabet("abc");
  const CascadeGraph g = Chain({}, 10);
  const EmissionTable emis = ManualEmissions(alphabet, {{0.5, 0.3, 0.2}}, {1.0});
  const Hypothesis h = DecodeExactNoLm(g, emis);
  CHECK(h.word == "a");
  CHECK(h.log_cost == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(h.path == std::vector<int>{0});
}

TEST_CASE("DecodeExactNoLm: a deterministic chain concatenates the argmaxes") {
  const Alphabet alphabet("abc");
  const CascadeGraph g = Chain({4, 8}, 12);
  const EmissionTable emis = ManualEmissions(
      alphabet,
      {{0.98, 0.01, 0.01}, {0.01, 0.01, 0.98}, {0.01, 0.98, 0.01}},
      {1.0, 1.0, 1.0});
  const Hypothesis h = DecodeExactNoLm(g, emis);
  CHECK(h.word == "acb");
  CHECK(h.log_cost == doctest::Approx(3.0 * std::log(0.98)).epsilon(1e-9));
}

TEST_CASE("DecodeExactNoLm equals brute-force enumeration on random cascades") {
  Rng rng(301);
  for (int trial = 0; trial < 200; ++trial) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, TestAlphabet());
    const Hypothesis got = DecodeExactNoLm(inst.graph, inst.emis);
    const testutil::Assignment want =
        testutil::BestNoLmByEnumeration(inst.graph, inst.emis);
    CHECK(got.log_cost == doctest::Approx(want.score).epsilon(1e-9));
    // Traceback consistency: the returned assignment reproduces the score.
    const double replay =
        testutil::ScoreOracle(inst.emis, nullptr, got.word, got.path);
    CHECK(replay == doctest::Approx(got.log_cost).epsilon(1e-9));
    CHECK(ScoreAssignment(inst.graph, inst.emis, nullptr, got.word, got.path) ==
          doctest::Approx(got.log_cost).epsilon(1e-9));
  }
}

TEST_CASE("DecodeExactBigram equals the chain-DP oracle on random cascades") {
  Rng rng(307);
  const Lexicon lex({"abe", "bad", "cab", "fad", "decaf", "bead"}, true);
  const NGramModel lm(lex, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, TestAlphabet());
    const Hypothesis got = DecodeExactBigram(inst.graph, inst.emis, lm);
    const testutil::Assignment want =
        testutil::BestBigramByEnumeration(inst.graph, inst.emis, lm);
    CHECK(got.log_cost == doctest::Approx(want.score).epsilon(1e-9));
    const double replay =
        testutil::ScoreOracle(inst.emis, &lm, got.word, got.path);
    CHECK(replay == doctest::Approx(got.log_cost).epsilon(1e-9));
    CHECK(ScoreAssignment(inst.graph, inst.emis, &lm, got.word, got.path) ==
          doctest::Approx(got.log_cost).epsilon(1e-9));
  }
}

TEST_CASE("The chain-DP oracle itself matches full enumeration on small cases") {
  Rng rng(311);
  const Lexicon lex({"abe", "bad", "cab"}, true);
  const NGramModel lm(lex, 2);
  const Alphabet small("abc");
  int done = 0;
  while (done < 20) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, small, /*max_parts=*/2, /*max_v=*/6);
    const testutil::Assignment fast =
        testutil::BestBigramByEnumeration(inst.graph, inst.emis, lm);
    const testutil::Assignment full =
        testutil::BestBigramByFullEnumeration(inst.graph, inst.emis, lm);
    CHECK(fast.score == doctest::Approx(full.score).epsilon(1e-9));
    CHECK(fast.word == full.word);
    ++done;
  }
}

TEST_CASE("A near-uniform LM leaves the no-LM argmax unchanged") {
  Rng rng(313);
  const NGramModel lm = NearUniformLm();
  for (int trial = 0; trial < 40; ++trial) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, TestAlphabet());
    const Hypothesis nolm = DecodeExactNoLm(inst.graph, inst.emis);
    const Hypothesis bigram = DecodeExactBigram(inst.graph, inst.emis, lm);
    CHECK(bigram.word == nolm.word);
    CHECK(bigram.path == nolm.path);
  }
}

TEST_CASE("A bigram model vetoes a visually preferred repeat") {
  const Alphabet alphabet("ab");
  const CascadeGraph g = Chain({5}, 10);
  // Both intervals mildly prefer 'a'.
  const EmissionTable emis =
      ManualEmissions(alphabet, {{0.55, 0.45}, {0.55, 0.45}}, {1.0, 1.0});
  CHECK(DecodeExactNoLm(g, emis).word == "aa");

  // The lexicon contains only "ab", so p(a|a) is tiny under light smoothing.
  const Lexicon lex({"ab"}, true);
  const NGramModel lm(lex, 2, /*alpha=*/1e-4, /*lambda=*/0.9);
  const Hypothesis flipped = DecodeExactBigram(g, emis, lm);
  CHECK(flipped.word == "ab");
  const testutil::Assignment want = testutil::BestBigramByEnumeration(g, emis, lm);
  CHECK(flipped.log_cost == doctest::Approx(want.score).epsilon(1e-9));
}

TEST_CASE("Beam search with a huge beam reproduces the exact bigram decode") {
  Rng rng(317);
  const Lexicon lex({"abe", "bad", "cab", "fad", "decaf", "bead"}, true);
  const NGramModel lm(lex, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, TestAlphabet());
    const Hypothesis exact = DecodeExactBigram(inst.graph, inst.emis, lm);
    const DecodeResult beam =
        CascadeBeamSearch(inst.graph, inst.emis, &lm, 4096);
    CHECK(beam.best().log_cost == doctest::Approx(exact.log_cost).epsilon(1e-9));
    CHECK(beam.best().word == exact.word);
  }
}

TEST_CASE("Beam search without a model reproduces the exact no-LM decode") {
  Rng rng(331);
  for (int trial = 0; trial < 60; ++trial) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, TestAlphabet());
    const Hypothesis exact = DecodeExactNoLm(inst.graph, inst.emis);
    const DecodeResult beam =
        CascadeBeamSearch(inst.graph, inst.emis, nullptr, 4096);
    CHECK(beam.best().log_cost == doctest::Approx(exact.log_cost).epsilon(1e-9));
  }
}

TEST_CASE("Beam of one on a chain is per-interval greedy") {
  const Alphabet alphabet("abc");
  const CascadeGraph g = Chain({4, 8}, 12);
  const EmissionTable emis = ManualEmissions(
      alphabet,
      {{0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}, {0.25, 0.25, 0.5}},
      {0.9, 0.8, 0.7});
  const Lexicon lex({"abc", "bca", "cab"}, true);
  const NGramModel lm(lex, 2);

  // Hand greedy: extend the single kept hypothesis one interval at a time.
  std::string greedy;
  for (int v = 0; v < 3; ++v) {
    int best_c = 0;
    double best = -1e300;
    for (int c = 0; c < alphabet.size(); ++c) {
      const double cand = emis.log_char[v][c] +
                          lm.LogProb(alphabet.Symbol(c), greedy);
      if (cand > best) {
        best = cand;
        best_c = c;
      }
    }
    greedy.push_back(alphabet.Symbol(best_c));
  }

  const DecodeResult beam = CascadeBeamSearch(g, emis, &lm, 1);
  CHECK(beam.best().word == greedy);
}

TEST_CASE("Beam widths nest and the top-1 cost never degrades") {
  Rng rng(337);
  const Lexicon lex({"abe", "bad", "cab", "fad"}, true);
  const NGramModel lm(lex, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, TestAlphabet());
    double prev_best = -std::numeric_limits<double>::infinity();
    std::vector<std::set<std::string>> prev_queues;
    for (int b : {1, 2, 4, 8, 16, 32}) {
      BeamTrace trace;
      const DecodeResult r =
          CascadeBeamSearch(inst.graph, inst.emis, &lm, b, &trace);
      CHECK(r.best().log_cost >= prev_best - 1e-12);
      prev_best = r.best().log_cost;

      std::vector<std::set<std::string>> queues;
      for (const auto& q : trace.queues) {
        std::set<std::string> words;
        for (const Hypothesis& h : q) {
          // Dedup inside a queue: one entry per transcript.
          CHECK(words.insert(h.word).second);
        }
        CHECK(words.size() <= static_cast<size_t>(b));
        queues.push_back(std::move(words));
      }
      if (!prev_queues.empty()) {
        REQUIRE(queues.size() == prev_queues.size());
        for (size_t v = 0; v < queues.size(); ++v)
          for (const std::string& w : prev_queues[v])
            CHECK(queues[v].count(w) == 1);
      }
      prev_queues = std::move(queues);
    }
  }
}

TEST_CASE("Duplicate transcripts keep the higher-cost path") {
  const Alphabet alphabet("a");
  std::vector<Interval> intervals = {
      {0, 5, IntervalOrigin::kHmm, 0.9},
      {0, 6, IntervalOrigin::kHmm, 0.5},
      {6, 10, IntervalOrigin::kHmm, 1.0},
  };
  const CascadeGraph g = BuildCascadeGraph(intervals, 10);
  REQUIRE(g.V() == 3);
  EmissionTable emis;
  emis.alphabet = &alphabet;
  emis.log_char = {{0.0}, {0.0}, {0.0}};
  emis.log_pv = {std::log(0.9), std::log(0.5), std::log(1.0)};

  BeamTrace trace;
  const DecodeResult r = CascadeBeamSearch(g, emis, nullptr, 8, &trace);
  // Both prefixes reach the last interval spelling "aa"; only the better
  // survives, and it rode the higher-scored first interval.
  REQUIRE(trace.queues[2].size() == 1);
  const Hypothesis& kept = trace.queues[2][0];
  CHECK(kept.word == "aa");
  CHECK(kept.path == std::vector<int>{0, 2});
  CHECK(kept.log_cost ==
        doctest::Approx(std::log(0.9) + std::log(1.0)).epsilon(1e-12));
  CHECK(r.best().word == "aa");
}

TEST_CASE("Scaling every interval score shifts costs but not transcripts") {
  Rng rng(347);
  const Lexicon lex({"abe", "bad"}, true);
  const NGramModel lm(lex, 2);
  for (int trial = 0; trial < 30; ++trial) {
    testutil::CascadeInstance inst = testutil::RandomCascade(rng, TestAlphabet());
    const Hypothesis before_nolm = DecodeExactNoLm(inst.graph, inst.emis);
    const Hypothesis before_lm = DecodeExactBigram(inst.graph, inst.emis, lm);
    const DecodeResult before_beam =
        CascadeBeamSearch(inst.graph, inst.emis, &lm, 4);
    const double shift = std::log(3.7);
    for (double& lp : inst.emis.log_pv) lp += shift;
    CHECK(DecodeExactNoLm(inst.graph, inst.emis).word == before_nolm.word);
    CHECK(DecodeExactBigram(inst.graph, inst.emis, lm).word == before_lm.word);
    const DecodeResult after_beam =
        CascadeBeamSearch(inst.graph, inst.emis, &lm, 4);
    CHECK(after_beam.best().word == before_beam.best().word);
  }
}

TEST_CASE("DecodeResult is sorted and bounded by beam times end set") {
  Rng rng(349);
  const Lexicon lex({"abe", "bad"}, true);
  const NGramModel lm(lex, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const testutil::CascadeInstance inst =
        testutil::RandomCascade(rng, TestAlphabet());
    const int b = 5;
    const DecodeResult r = CascadeBeamSearch(inst.graph, inst.emis, &lm, b);
    CHECK(r.ranked.size() <=
          static_cast<size_t>(b) * inst.graph.end_set.size());
    for (size_t i = 1; i < r.ranked.size(); ++i)
      CHECK_FALSE(HypothesisBetter(r.ranked[i], r.ranked[i - 1]));
    for (const Hypothesis& h : r.ranked) {
      CHECK(h.word.size() == h.path.size());
      CHECK(std::isfinite(h.log_cost));
      CHECK(ScoreAssignment(inst.graph, inst.emis, &lm, h.word, h.path) ==
            doctest::Approx(h.log_cost).epsilon(1e-9));
    }
  }
}

TEST_CASE("Beam runtime grows at most linearly in the width") {
  Rng rng(353);
  // A longer chain with splits so the queues actually fill.
  std::vector<Interval> intervals;
  const int parts = 12;
  for (int p = 0; p < parts; ++p) {
    const int a = p * 8, b = (p + 1) * 8;
    intervals.push_back({a, b, IntervalOrigin::kHmm, 0.8});
    intervals.push_back({a, a + 4, IntervalOrigin::kSplitLeft, 0.6});
    intervals.push_back({a + 4, b, IntervalOrigin::kSplitRight, 0.6});
  }
  const CascadeGraph g = BuildCascadeGraph(intervals, parts * 8);
  const Alphabet& full = Alphabet::Full();
  EmissionTable emis;
  emis.alphabet = &full;
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int v = 0; v < g.V(); ++v) {
    std::vector<double> row(full.size());
    double total = 0.0;
    for (double& x : row) {
      x = unit(rng);
      total += x;
    }
    for (double& x : row) x = std::log(x / total);
    emis.log_char.push_back(std::move(row));
    emis.log_pv.push_back(std::log(unit(rng)));
  }
  const Lexicon lex(RandomWordList(40, 9), true);
  const NGramModel lm(lex, 3);

  const auto time_beam = [&](int b) {
    double best = 1e300;
    for (int rep = 0; rep < 5; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      CascadeBeamSearch(g, emis, &lm, b);
      const auto t1 = std::chrono::steady_clock::now();
      best = std::min(best,
                      std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
  };
  const double t8 = time_beam(8);
  const double t64 = time_beam(64);
  // Linear growth with a 2x noise allowance: 64/8 = 8, so at most 16x.
  CHECK(t64 <= 16.0 * t8 + 1e-3);
}
