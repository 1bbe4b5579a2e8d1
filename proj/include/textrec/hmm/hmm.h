// textrec/hmm/hmm.h

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

// Hybrid HMM over frame classifier outputs.  Emissions are scaled
// likelihoods p(state | frame) / p(state); transitions follow the
// left-to-right two-region-class topology.  All scoring is in log space.

#ifndef TEXTREC_HMM_HMM_H_
#define TEXTREC_HMM_HMM_H_

#include <vector>

#include "json.hpp"
#include "textrec/hmm/topology.h"
#include "textrec/imaging/frames.h"
#include "textrec/imaging/synth.h"
#include "textrec/net/classifier.h"

namespace textrec {

// Probabilities below this are clamped up before logs are taken, so every
// permitted arc stays usable after estimation from sparse alignments.
inline constexpr double kHmmProbFloor = 1e-6;

// One state path per utterance, one state per frame.
using Alignment = std::vector<int>;

struct TransitionModel {
  HmmTopology topology;
  std::vector<double> log_prob;  // row-major S x S; kLogZero on forbidden arcs

  double LogProb(int from, int to) const {
    return log_prob[static_cast<size_t>(from) * topology.NumStates() + to];
  }
};

struct StatePrior {
  std::vector<double> log_prob;  // length S
};

struct HmmModel {
  TransitionModel transitions;
  StatePrior prior;

  nlohmann::json ToJson() const;
  static HmmModel FromJson(const nlohmann::json& j);
};

// Add-one estimation over permitted arcs from the given alignments, then the
// probability floor, then logs.  The prior is the add-one-smoothed frame
// frequency of each state.
HmmModel EstimateHmm(const HmmTopology& topology,
                     const std::vector<Alignment>& alignments);

// log( p(state|frame) / p(state) ) per state for one frame.
std::vector<double> ScaledLogLikelihood(const std::vector<double>& posteriors,
                                        const StatePrior& prior);

struct ViterbiResult {
  Alignment path;
  double log_score = 0.0;
};

// Exact max-product decode.  The initial distribution is concentrated on the
// first state of region class 0.  `frame_log_lik` is T x S.  Throws
// std::runtime_error if no admissible path exists.  Argmax ties resolve to
// the lowest state index.
ViterbiResult HmmViterbi(const std::vector<std::vector<double>>& frame_log_lik,
                         const TransitionModel& transitions);

// Collapses a state path into region intervals over source image columns.
// Interval i starts at the start column of its first frame; the last
// interval ends at the source width.
std::vector<RegionInterval> PathToSegmentation(const Alignment& path,
                                               const HmmTopology& topology,
                                               const FrameSequence& frames);

// Frame emissions for a whole sequence via the frame classifier.
std::vector<std::vector<double>> FrameEmissions(const Classifier& frame_net,
                                                const FrameSequence& frames,
                                                const StatePrior& prior);

struct EmbeddedTrainConfig {
  int rounds = 1;
  double stretch = 0.10;   // ground-truth region stretch for the initial labels
  TrainConfig net;
};

struct EmbeddedOutcome {
  Classifier frame_net;
  HmmModel hmm;
  std::vector<Alignment> alignments;   // final per-word state paths
  std::vector<double> round_log_scores;  // summed Viterbi scores per round
  std::vector<EpochStats> net_history;   // frame-net epochs, final round
};

// Embedded Viterbi training: each round trains the frame classifier on the
// current alignments, re-estimates transitions and the prior, and re-aligns
// every word.  Round 0 alignments come from rendered ground truth with the
// stretch rule applied.
EmbeddedOutcome EmbeddedViterbiTrain(const NetworkSpec& frame_spec,
                                     const std::vector<WordSample>& words,
                                     const HmmTopology& topology,
                                     const EmbeddedTrainConfig& config);

}  // namespace textrec

#endif  // TEXTREC_HMM_HMM_H_
