// src/decoder.cc

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

#include "textrec/decode/decoder.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace textrec {
namespace {

constexpr double kUnreached = -std::numeric_limits<double>::infinity();

std::vector<Hypothesis> RankAndDedupe(std::vector<Hypothesis> hyps) {
  std::unordered_map<std::string, size_t> best;
  std::vector<Hypothesis> unique;
  for (Hypothesis& h : hyps) {
    auto [it, inserted] = best.try_emplace(h.word, unique.size());
    if (inserted) {
      unique.push_back(std::move(h));
    } else if (HypothesisBetter(h, unique[it->second])) {
      unique[it->second] = std::move(h);
    }
  }
  std::sort(unique.begin(), unique.end(), HypothesisBetter);
  return unique;
}

}  // namespace

bool HypothesisBetter(const Hypothesis& a, const Hypothesis& b) {
  if (a.log_cost != b.log_cost) return a.log_cost > b.log_cost;
  if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
  return a.word < b.word;
}

EmissionTable BuildEmissions(const GrayImage& img, const CascadeGraph& graph,
                             const Classifier& char_net, bool collapse) {
  EmissionTable table;
  table.alphabet = collapse ? &Alphabet::Collapsed() : &Alphabet::Full();
  if (char_net.spec().num_labels != Alphabet::Full().size())
    throw std::invalid_argument("BuildEmissions: character net has " +
                                std::to_string(char_net.spec().num_labels) +
                                " labels, want 62");
  table.log_char.reserve(graph.V());
  table.log_pv.reserve(graph.V());
  for (const Interval& v : graph.intervals) {
    const Patch p = NormalizePatch(ResampleToPatch(
        img, v.start, 0, v.Width(), img.height, char_net.spec().input_side));
    std::vector<double> post = char_net.PredictPosteriors(p);
    if (collapse) post = CollapseCase(post);
    std::vector<double> row(post.size());
    for (size_t c = 0; c < post.size(); ++c) row[c] = SafeLog(post[c]);
    table.log_char.push_back(std::move(row));
    table.log_pv.push_back(SafeLog(v.p_correct));
  }
  return table;
}

Hypothesis DecodeExactNoLm(const CascadeGraph& graph, const EmissionTable& emis) {
  const int v_count = graph.V();
  if (emis.V() != v_count)
    throw std::invalid_argument("DecodeExactNoLm: emission table size mismatch");
  const int k_count = emis.K();

  std::vector<int> best_char(v_count, 0);
  std::vector<double> em(v_count, 0.0);
  for (int k = 0; k < v_count; ++k) {
    int arg = 0;
    for (int c = 1; c < k_count; ++c)
      if (emis.log_char[k][c] > emis.log_char[k][arg]) arg = c;
    best_char[k] = arg;
    em[k] = emis.log_char[k][arg] + emis.log_pv[k];
  }

  std::vector<double> score(v_count, kUnreached);
  std::vector<int> back(v_count, -1);
  for (int k = 0; k < v_count; ++k) {
    // A fresh start contributes log 1 = 0; since all costs are <= 0 it also
    // wins ties against any predecessor, matching the shorter-word rule.
    double base = graph.is_start[k] ? 0.0 : kUnreached;
    int arg = -1;
    for (int u : graph.predecessors[k]) {
      if (score[u] > base) {
        base = score[u];
        arg = u;
      }
    }
    if (base != kUnreached) {
      score[k] = base + em[k];
      back[k] = arg;
    }
  }

  int best_end = -1;
  for (int k : graph.end_set)
    if (score[k] != kUnreached && (best_end < 0 || score[k] > score[best_end]))
      best_end = k;
  if (best_end < 0)
    throw std::runtime_error("decode: end set unreachable from start set");

  Hypothesis hyp;
  hyp.log_cost = score[best_end];
  hyp.log_cost_v = score[best_end];
  for (int k = best_end; k >= 0; k = back[k]) hyp.path.push_back(k);
  std::reverse(hyp.path.begin(), hyp.path.end());
  for (int k : hyp.path) hyp.word.push_back(emis.alphabet->Symbol(best_char[k]));
  return hyp;
}

Hypothesis DecodeExactBigram(const CascadeGraph& graph, const EmissionTable& emis,
                             const NGramModel& lm) {
  if (lm.order() > 2)
    throw std::invalid_argument("DecodeExactBigram: model order must be <= 2");
  const int v_count = graph.V();
  if (emis.V() != v_count)
    throw std::invalid_argument("DecodeExactBigram: emission table size mismatch");
  const int k_count = emis.K();

  // LM terms depend only on (previous char, char); cache them.
  std::vector<double> lm_start(k_count);
  std::vector<std::vector<double>> lm_step(k_count, std::vector<double>(k_count));
  for (int c = 0; c < k_count; ++c) {
    const char sym = emis.alphabet->Symbol(c);
    lm_start[c] = lm.LogProb(sym, "");
    for (int p = 0; p < k_count; ++p)
      lm_step[p][c] = lm.LogProb(sym, std::string(1, emis.alphabet->Symbol(p)));
  }

  std::vector<std::vector<double>> score(
      v_count, std::vector<double>(k_count, kUnreached));
  std::vector<std::vector<int>> back_iv(v_count, std::vector<int>(k_count, -1));
  std::vector<std::vector<int>> back_ch(v_count, std::vector<int>(k_count, -1));

  for (int k = 0; k < v_count; ++k) {
    for (int c = 0; c < k_count; ++c) {
      double best = graph.is_start[k] ? lm_start[c] : kUnreached;
      int bi = -1, bc = -1;
      for (int u : graph.predecessors[k]) {
        for (int p = 0; p < k_count; ++p) {
          if (score[u][p] == kUnreached) continue;
          const double cand = score[u][p] + lm_step[p][c];
          if (cand > best) {
            best = cand;
            bi = u;
            bc = p;
          }
        }
      }
      if (best != kUnreached) {
        score[k][c] = best + emis.log_char[k][c] + emis.log_pv[k];
        back_iv[k][c] = bi;
        back_ch[k][c] = bc;
      }
    }
  }

  int best_end = -1, best_char = -1;
  double best_score = kUnreached;
  for (int k : graph.end_set) {
    for (int c = 0; c < k_count; ++c) {
      if (score[k][c] > best_score) {
        best_score = score[k][c];
        best_end = k;
        best_char = c;
      }
    }
  }
  if (best_end < 0)
    throw std::runtime_error("decode: end set unreachable from start set");

  Hypothesis hyp;
  hyp.log_cost = best_score;
  for (int k = best_end, c = best_char; k >= 0;) {
    hyp.path.push_back(k);
    hyp.word.push_back(emis.alphabet->Symbol(c));
    const int pk = back_iv[k][c], pc = back_ch[k][c];
    k = pk;
    c = pc;
  }
  std::reverse(hyp.path.begin(), hyp.path.end());
  std::reverse(hyp.word.begin(), hyp.word.end());
  for (size_t i = 0; i < hyp.path.size(); ++i) {
    const int iv = hyp.path[i];
    const int c = emis.alphabet->IndexOf(hyp.word[i]);
    hyp.log_cost_v += emis.log_char[iv][c] + emis.log_pv[iv];
  }
  return hyp;
}

DecodeResult CascadeBeamSearch(const CascadeGraph& graph, const EmissionTable& emis,
                               const NGramModel* lm, int beam_width,
                               BeamTrace* trace) {
  if (beam_width < 1)
    throw std::invalid_argument("CascadeBeamSearch: beam width must be >= 1");
  const int v_count = graph.V();
  if (emis.V() != v_count)
    throw std::invalid_argument("CascadeBeamSearch: emission table size mismatch");
  const int k_count = emis.K();

  std::vector<std::vector<Hypothesis>> queues(v_count);
  for (int k = 0; k < v_count; ++k) {
    std::vector<Hypothesis> cand;
    if (graph.is_start[k]) {
      for (int c = 0; c < k_count; ++c) {
        const char sym = emis.alphabet->Symbol(c);
        const double em = emis.log_char[k][c] + emis.log_pv[k];
        Hypothesis h;
        h.word.assign(1, sym);
        h.log_cost_v = em;
        h.log_cost = em + (lm != nullptr ? lm->LogProb(sym, "") : 0.0);
        h.path = {k};
        cand.push_back(std::move(h));
      }
    }
    for (int u : graph.predecessors[k]) {
      for (const Hypothesis& base : queues[u]) {
        for (int c = 0; c < k_count; ++c) {
          const char sym = emis.alphabet->Symbol(c);
          const double em = emis.log_char[k][c] + emis.log_pv[k];
          Hypothesis h;
          h.word = base.word + sym;
          h.log_cost_v = base.log_cost_v + em;
          h.log_cost = base.log_cost + em +
                       (lm != nullptr ? lm->LogProb(sym, base.word) : 0.0);
          h.path = base.path;
          h.path.push_back(k);
          cand.push_back(std::move(h));
        }
      }
    }
    cand = RankAndDedupe(std::move(cand));
    if (static_cast<int>(cand.size()) > beam_width) cand.resize(beam_width);
    queues[k] = std::move(cand);
  }

  std::vector<Hypothesis> finals;
  for (int k : graph.end_set)
    for (const Hypothesis& h : queues[k]) finals.push_back(h);
  DecodeResult result;
  result.ranked = RankAndDedupe(std::move(finals));
  if (result.ranked.empty())
    throw std::runtime_error("beam search: no start-to-end hypothesis");
  if (trace != nullptr) trace->queues = std::move(queues);
  return result;
}

double ScoreAssignment(const CascadeGraph& graph, const EmissionTable& emis,
                       const NGramModel* lm, const std::string& word,
                       const std::vector<int>& path) {
  if (word.size() != path.size() || word.empty())
    throw std::invalid_argument("ScoreAssignment: word/path length mismatch");
  if (!graph.is_start[path.front()])
    throw std::invalid_argument("ScoreAssignment: path does not begin at a start interval");
  for (size_t i = 1; i < path.size(); ++i) {
    const std::vector<int>& preds = graph.predecessors[path[i]];
    if (std::find(preds.begin(), preds.end(), path[i - 1]) == preds.end())
      throw std::invalid_argument("ScoreAssignment: path uses a missing edge");
  }
  double total = 0.0;
  for (size_t i = 0; i < path.size(); ++i) {
    const int c = emis.alphabet->IndexOf(word[i]);
    if (c < 0) throw std::invalid_argument("ScoreAssignment: symbol outside alphabet");
    total += emis.log_char[path[i]][c] + emis.log_pv[path[i]];
    if (lm != nullptr) total += lm->LogProb(word[i], word.substr(0, i));
  }
  return total;
}

std::string DecodeModeName(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::kNoLm: return "no-lm";
    case DecodeMode::kLm: return "lm";
    case DecodeMode::kEditDistance: return "edit-distance";
  }
  return "?";
}

namespace {

template <typename Fn>
auto RunStage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("recognize_word[") + stage + "]: " +
                             e.what());
  }
}

}  // namespace

RecognizedWord RecognizeWord(const GrayImage& img, const WordRecognizer& rec,
                             const RecognizeOptions& opts,
                             CascadeGraph* cascade_out, BeamTrace* trace_out) {
  const auto t0 = std::chrono::steady_clock::now();

  const FrameSequence frames = RunStage(
      "frames", [&] { return ExtractFramesDefault(img, rec.frame_net.spec().input_side); });
  const ViterbiResult vit = RunStage("viterbi", [&] {
    return HmmViterbi(FrameEmissions(rec.frame_net, frames, rec.hmm.prior),
                      rec.hmm.transitions);
  });
  const std::vector<RegionInterval> segments = RunStage("segmentation", [&] {
    return PathToSegmentation(vit.path, rec.hmm.transitions.topology, frames);
  });
  const CascadeGraph cascade = RunStage("cascade", [&] {
    return BuildWordCascade(img, segments, rec.correction_net, rec.gap_tol);
  });
  const EmissionTable emis = RunStage("emissions", [&] {
    return BuildEmissions(img, cascade, rec.char_net, rec.collapse);
  });

  BeamTrace trace;
  DecodeResult result = RunStage("decode", [&] {
    switch (opts.mode) {
      case DecodeMode::kNoLm: {
        DecodeResult r;
        r.ranked.push_back(DecodeExactNoLm(cascade, emis));
        return r;
      }
      case DecodeMode::kLm:
        if (!rec.lm.has_value())
          throw std::invalid_argument("lm mode requires a language model");
        return CascadeBeamSearch(cascade, emis, &*rec.lm, opts.beam_width, &trace);
      case DecodeMode::kEditDistance:
        if (!rec.lexicon.has_value())
          throw std::invalid_argument("edit-distance mode requires a lexicon");
        return CascadeBeamSearch(cascade, emis,
                                 rec.lm.has_value() ? &*rec.lm : nullptr,
                                 opts.beam_width, &trace);
    }
    throw std::logic_error("unknown decode mode");
  });

  if (opts.length_normalize) {
    std::stable_sort(result.ranked.begin(), result.ranked.end(),
                     [](const Hypothesis& a, const Hypothesis& b) {
                       const double an = a.log_cost / a.word.size();
                       const double bn = b.log_cost / b.word.size();
                       if (an != bn) return an > bn;
                       return HypothesisBetter(a, b);
                     });
  }

  RecognizedWord out;
  size_t winner = 0;
  if (opts.mode == DecodeMode::kEditDistance) {
    RunStage("lexicon", [&] {
      std::vector<std::string> ranked_words;
      ranked_words.reserve(result.ranked.size());
      for (const Hypothesis& h : result.ranked) ranked_words.push_back(h.word);
      const LexiconChoice choice = LexiconSelect(ranked_words, *rec.lexicon);
      out.transcript = choice.word;
      out.diagnostics.select_mode =
          choice.mode == SelectMode::kInList ? "in-list" : "edit-distance";
      out.diagnostics.edit_dist = choice.edit_dist;
      if (choice.mode == SelectMode::kInList) {
        const bool cs = rec.lexicon->case_sensitive();
        for (size_t i = 0; i < ranked_words.size(); ++i) {
          const std::string w =
              cs ? ranked_words[i] : CollapseString(ranked_words[i]);
          if (w == choice.word) {
            winner = i;
            break;
          }
        }
      }
      return 0;
    });
  } else {
    out.transcript = result.ranked.front().word;
    out.diagnostics.select_mode = "none";
  }

  const Hypothesis& win = result.ranked[winner];
  out.diagnostics.num_frames = static_cast<int>(frames.Count());
  out.diagnostics.cascade_size = cascade.V();
  out.diagnostics.beam_width = opts.beam_width;
  out.diagnostics.mode = DecodeModeName(opts.mode);
  out.diagnostics.log_cost = win.log_cost;
  out.diagnostics.cost_v = win.log_cost_v;
  out.diagnostics.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  out.result = std::move(result);
  if (cascade_out != nullptr) *cascade_out = cascade;
  if (trace_out != nullptr) *trace_out = std::move(trace);
  return out;
}

}  // namespace textrec
