// src/hmm.cc

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

#include "textrec/hmm/hmm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace textrec {

namespace {

// JSON has no -inf literal; the serializer emits null for it, so read null
// back as log 0 (a forbidden arc).
std::vector<double> LogVectorFromJson(const nlohmann::json& arr) {
  std::vector<double> out;
  out.reserve(arr.size());
  for (const nlohmann::json& v : arr)
    out.push_back(v.is_null() ? -std::numeric_limits<double>::infinity()
                              : v.get<double>());
  return out;
}

}  // namespace

nlohmann::json HmmModel::ToJson() const {
  return nlohmann::json{
      {"format", "hmm"},
      {"num_classes", transitions.topology.num_classes},
      {"states_per_region", transitions.topology.states_per_region},
      {"class_names", transitions.topology.class_names},
      {"log_transitions", transitions.log_prob},
      {"log_prior", prior.log_prob}};
}

HmmModel HmmModel::FromJson(const nlohmann::json& j) {
  HmmModel m;
  m.transitions.topology.num_classes = j.at("num_classes").get<int>();
  m.transitions.topology.states_per_region = j.at("states_per_region").get<int>();
  m.transitions.topology.class_names =
      j.at("class_names").get<std::vector<std::string>>();
  m.transitions.log_prob = LogVectorFromJson(j.at("log_transitions"));
  m.prior.log_prob = LogVectorFromJson(j.at("log_prior"));
  const size_t s = m.transitions.topology.NumStates();
  if (m.transitions.log_prob.size() != s * s || m.prior.log_prob.size() != s)
    throw std::runtime_error("hmm block sizes do not match topology");
  return m;
}

HmmModel EstimateHmm(const HmmTopology& topology,
                     const std::vector<Alignment>& alignments) {
  const int s = topology.NumStates();
  std::vector<double> arc_count(static_cast<size_t>(s) * s, 0.0);
  std::vector<double> state_count(s, 0.0);
  for (const Alignment& a : alignments) {
    for (size_t t = 0; t < a.size(); ++t) {
      const int q = a[t];
      if (q < 0 || q >= s)
        throw std::invalid_argument("alignment state " + std::to_string(q) +
                                    " outside topology");
      state_count[q] += 1.0;
      if (t + 1 < a.size()) {
        if (!topology.Permitted(q, a[t + 1]))
          throw std::invalid_argument(
              "alignment uses forbidden arc " + std::to_string(q) + " -> " +
              std::to_string(a[t + 1]));
        arc_count[static_cast<size_t>(q) * s + a[t + 1]] += 1.0;
      }
    }
  }

  HmmModel model;
  model.transitions.topology = topology;
  model.transitions.log_prob.assign(static_cast<size_t>(s) * s, kLogZero);
  for (int from = 0; from < s; ++from) {
    double row_total = 0.0;
    for (int to = 0; to < s; ++to)
      if (topology.Permitted(from, to))
        row_total += arc_count[static_cast<size_t>(from) * s + to] + 1.0;
    for (int to = 0; to < s; ++to) {
      if (!topology.Permitted(from, to)) continue;
      const double p =
          (arc_count[static_cast<size_t>(from) * s + to] + 1.0) / row_total;
      model.transitions.log_prob[static_cast<size_t>(from) * s + to] =
          std::log(std::max(p, kHmmProbFloor));
    }
  }

  double total = 0.0;
  for (double c : state_count) total += c + 1.0;
  model.prior.log_prob.assign(s, 0.0);
  for (int q = 0; q < s; ++q)
    model.prior.log_prob[q] =
        std::log(std::max((state_count[q] + 1.0) / total, kHmmProbFloor));
  return model;
}

std::vector<double> ScaledLogLikelihood(const std::vector<double>& posteriors,
                                        const StatePrior& prior) {
  if (posteriors.size() != prior.log_prob.size())
    throw std::invalid_argument("posterior/prior size mismatch");
  std::vector<double> out(posteriors.size());
  for (size_t q = 0; q < posteriors.size(); ++q)
    out[q] = SafeLog(posteriors[q]) - prior.log_prob[q];
  return out;
}

ViterbiResult HmmViterbi(const std::vector<std::vector<double>>& frame_log_lik,
                         const TransitionModel& transitions) {
  const int s = transitions.topology.NumStates();
  const size_t t_count = frame_log_lik.size();
  if (t_count == 0) throw std::invalid_argument("HmmViterbi: no frames");
  for (const auto& row : frame_log_lik)
    if (static_cast<int>(row.size()) != s)
      throw std::invalid_argument("HmmViterbi: emission row size mismatch");

  const int start_state = transitions.topology.FirstStateOf(0);
  std::vector<double> delta(s, kLogZero);
  delta[start_state] = frame_log_lik[0][start_state];
  std::vector<std::vector<int>> back(t_count, std::vector<int>(s, -1));

  std::vector<double> next(s);
  for (size_t t = 1; t < t_count; ++t) {
    std::fill(next.begin(), next.end(), kLogZero);
    for (int to = 0; to < s; ++to) {
      double best = kLogZero;
      int arg = -1;
      for (int from = 0; from < s; ++from) {
        const double lp = transitions.LogProb(from, to);
        if (lp <= kLogZero || delta[from] <= kLogZero) continue;
        const double cand = delta[from] + lp;
        if (cand > best) {
          best = cand;
          arg = from;
        }
      }
      if (arg >= 0) {
        next[to] = best + frame_log_lik[t][to];
        back[t][to] = arg;
      }
    }
    delta.swap(next);
  }

  int best_state = -1;
  double best_score = kLogZero;
  for (int q = 0; q < s; ++q) {
    if (delta[q] > best_score && delta[q] > kLogZero) {
      best_score = delta[q];
      best_state = q;
    }
  }
  if (best_state < 0)
    throw std::runtime_error("HmmViterbi: no admissible state path");

  ViterbiResult result;
  result.log_score = best_score;
  result.path.assign(t_count, -1);
  result.path[t_count - 1] = best_state;
  for (size_t t = t_count - 1; t > 0; --t)
    result.path[t - 1] = back[t][result.path[t]];
  return result;
}

std::vector<RegionInterval> PathToSegmentation(const Alignment& path,
                                               const HmmTopology& topology,
                                               const FrameSequence& frames) {
  if (static_cast<int>(path.size()) != frames.Count())
    throw std::invalid_argument("path length " + std::to_string(path.size()) +
                                " != frame count " +
                                std::to_string(frames.Count()));
  std::vector<RegionInterval> out;
  for (size_t t = 0; t < path.size(); ++t) {
    const int cls = topology.ClassOf(path[t]);
    const int col = frames.StartColumn(t);
    // A new region begins on a class change or when the path re-enters the
    // first state of the same class (two abutting regions of one class).
    const bool fresh =
        out.empty() || cls != out.back().region_class ||
        (t > 0 && path[t] == topology.FirstStateOf(cls) &&
         path[t - 1] != path[t] && topology.ClassOf(path[t - 1]) == cls);
    if (fresh) {
      if (!out.empty()) out.back().span.end = col;
      out.push_back(RegionInterval{cls, {col, col}});
    }
  }
  out.back().span.end = frames.source_width;
  return out;
}

std::vector<std::vector<double>> FrameEmissions(const Classifier& frame_net,
                                                const FrameSequence& frames,
                                                const StatePrior& prior) {
  std::vector<std::vector<double>> out;
  out.reserve(frames.Count());
  for (const Patch& p : frames.frames)
    out.push_back(ScaledLogLikelihood(frame_net.PredictPosteriors(p), prior));
  return out;
}

EmbeddedOutcome EmbeddedViterbiTrain(const NetworkSpec& frame_spec,
                                     const std::vector<WordSample>& words,
                                     const HmmTopology& topology,
                                     const EmbeddedTrainConfig& config) {
  if (words.empty())
    throw std::invalid_argument("EmbeddedViterbiTrain: no words");
  if (config.rounds < 1)
    throw std::invalid_argument("EmbeddedViterbiTrain: rounds must be >= 1");
  if (frame_spec.num_labels != topology.NumStates())
    throw std::invalid_argument("frame net labels != topology states");

  std::vector<FrameSequence> seqs;
  std::vector<Alignment> aligns;
  seqs.reserve(words.size());
  aligns.reserve(words.size());
  for (const WordSample& w : words) {
    seqs.push_back(ExtractFramesDefault(w.image, frame_spec.input_side));
    aligns.push_back(FrameLabels(w.char_spans, seqs.back(), topology,
                                 config.stretch));
  }

  EmbeddedOutcome out{Classifier(frame_spec), {}, {}, {}, {}};
  for (int round = 0; round < config.rounds; ++round) {
    PatchDataset data;
    for (size_t w = 0; w < words.size(); ++w)
      for (int t = 0; t < seqs[w].Count(); ++t)
        data.push_back(LabeledPatch{seqs[w].frames[t], aligns[w][t]});

    TrainConfig net_config = config.net;
    net_config.seed = config.net.seed + static_cast<uint64_t>(round);
    TrainOutcome trained = TrainClassifier(frame_spec, data, net_config);
    out.frame_net = std::move(trained.classifier);
    out.net_history = std::move(trained.history);
    out.hmm = EstimateHmm(topology, aligns);

    double total = 0.0;
    for (size_t w = 0; w < words.size(); ++w) {
      ViterbiResult v = HmmViterbi(
          FrameEmissions(out.frame_net, seqs[w], out.hmm.prior),
          out.hmm.transitions);
      total += v.log_score;
      aligns[w] = std::move(v.path);
    }
    out.round_log_scores.push_back(total);
  }
  out.alignments = std::move(aligns);
  return out;
}

}  // namespace textrec
