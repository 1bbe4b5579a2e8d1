// textrec/decode/decoder.h

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

// Word decoding over the cascade graph: exact dynamic programs for the
// unigram-free and bigram cases, and the beam search that handles any model
// order.  Scores are log products of per-interval visual costs
// p(c|v) * p(v) and linguistic costs p(c | lm, prefix).

#ifndef TEXTREC_DECODE_DECODER_H_
#define TEXTREC_DECODE_DECODER_H_

#include <optional>
#include <string>
#include <vector>

#include "textrec/cascade/cascade.h"
#include "textrec/hmm/hmm.h"
#include "textrec/lm/lexicon.h"
#include "textrec/lm/ngram.h"

namespace textrec {

// Per-interval emissions: log p(c | v_k) rows and log p(v_k) column.
struct EmissionTable {
  std::vector<std::vector<double>> log_char;  // V rows, K entries each
  std::vector<double> log_pv;                 // V entries
  const Alphabet* alphabet = nullptr;

  int K() const { return alphabet->size(); }
  int V() const { return static_cast<int>(log_pv.size()); }
};

// Character net posteriors (optionally case-collapsed) plus the intervals'
// p_correct scores.  `p_correct` values of zero score as log(kProbFloor).
EmissionTable BuildEmissions(const GrayImage& img, const CascadeGraph& graph,
                             const Classifier& char_net, bool collapse);

struct Hypothesis {
  std::string word;
  double log_cost = 0.0;    // visual + linguistic
  double log_cost_v = 0.0;  // visual part only
  std::vector<int> path;    // interval indices, one per character

  int end_interval() const { return path.empty() ? -1 : path.back(); }
};

// Total order used for ranking and beam pruning: higher cost, then shorter
// word, then lexicographically smaller word.
bool HypothesisBetter(const Hypothesis& a, const Hypothesis& b);

struct DecodeResult {
  std::vector<Hypothesis> ranked;  // descending by HypothesisBetter

  const Hypothesis& best() const { return ranked.front(); }
};

// Eq.-2-style exact decode: no linguistic term, the best character per
// interval chains over the best predecessor.  Throws std::runtime_error if
// no start-to-end path exists.
Hypothesis DecodeExactNoLm(const CascadeGraph& graph, const EmissionTable& emis);

// Eq.-3-style exact decode over (character, interval) states with a bigram
// model; start intervals use p(c | begin-of-word).
Hypothesis DecodeExactBigram(const CascadeGraph& graph, const EmissionTable& emis,
                             const NGramModel& lm);

// Retained queue contents per interval, for diagnostics and the beam dump.
struct BeamTrace {
  std::vector<std::vector<Hypothesis>> queues;  // one vector per interval
};

// Beam search over the cascade.  `lm` may be null (visual costs only).
// Per-interval queues keep the top `beam_width` hypotheses; duplicate
// transcripts keep the higher-cost copy.  The ranked union over end
// intervals is returned.
DecodeResult CascadeBeamSearch(const CascadeGraph& graph, const EmissionTable& emis,
                               const NGramModel* lm, int beam_width,
                               BeamTrace* trace = nullptr);

// Log cost of a specific (word, path) assignment under the same scoring; for
// traceback-consistency checks.
double ScoreAssignment(const CascadeGraph& graph, const EmissionTable& emis,
                       const NGramModel* lm, const std::string& word,
                       const std::vector<int>& path);

// ---------------------------------------------------------------------------
// Word-recognition orchestration
// ---------------------------------------------------------------------------

enum class DecodeMode { kNoLm, kLm, kEditDistance };

std::string DecodeModeName(DecodeMode mode);

struct WordRecognizer {
  Classifier frame_net;       // HMM state classifier (char/inter topology)
  HmmModel hmm;
  Classifier correction_net;  // 3-class segmentation correction
  Classifier char_net;        // 62-way character classifier
  std::optional<NGramModel> lm;
  std::optional<Lexicon> lexicon;
  bool collapse = false;      // case-insensitive transcripts and emissions
  int gap_tol = kDefaultGapTol;
};

struct RecognizeOptions {
  DecodeMode mode = DecodeMode::kEditDistance;
  int beam_width = 100;
  // Rank final hypotheses by log_cost / word length instead of raw log_cost.
  bool length_normalize = false;
};

struct WordDiagnostics {
  int num_frames = 0;
  int cascade_size = 0;      // V
  int beam_width = 0;
  std::string mode;
  double log_cost = 0.0;     // winning hypothesis, total
  double cost_v = 0.0;       // winning hypothesis, visual part
  int edit_dist = 0;
  std::string select_mode;   // "in-list", "edit-distance", or "none"
  double latency_ms = 0.0;
};

struct RecognizedWord {
  std::string transcript;
  WordDiagnostics diagnostics;
  DecodeResult result;  // ranked hypotheses before lexicon post-processing
};

// Full pipeline: frames -> Viterbi segmentation -> cascade -> emissions ->
// decode -> optional lexicon post-processing.  Stage failures rethrow as
// std::runtime_error tagged "recognize_word[<stage>]".  Optional out-params
// capture the cascade and beam queues for the CLI dump flags.
RecognizedWord RecognizeWord(const GrayImage& img, const WordRecognizer& rec,
                             const RecognizeOptions& opts,
                             CascadeGraph* cascade_out = nullptr,
                             BeamTrace* trace_out = nullptr);

}  // namespace textrec

#endif  // TEXTREC_DECODE_DECODER_H_
