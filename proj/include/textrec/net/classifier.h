// textrec/net/classifier.h

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

#ifndef TEXTREC_NET_CLASSIFIER_H_
#define TEXTREC_NET_CLASSIFIER_H_

#include <functional>
#include <string>
#include <vector>

#include "textrec/imaging/image.h"
#include "textrec/io/container.h"
#include "textrec/net/network.h"

namespace textrec {

struct LabeledPatch {
  Patch patch;
  int label = 0;
};
using PatchDataset = std::vector<LabeledPatch>;

// A trained network plus optional label names.  Prediction is const; nothing
// mutates parameters after training.
class Classifier {
 public:
  explicit Classifier(const NetworkSpec& spec) : net_(spec) {}

  const NetworkSpec& spec() const { return net_.spec(); }
  Network& network() { return net_; }
  const Network& network() const { return net_; }

  std::vector<std::string>& label_names() { return label_names_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  std::vector<double> PredictPosteriors(const Patch& patch) const;
  std::vector<double> PredictPosteriors(const std::vector<double>& input) const {
    return net_.Posteriors(input);
  }
  int PredictLabel(const Patch& patch) const;

  // Container round trip.  Save writes header + parameter blocks; Load
  // validates the architecture and every block size.
  void Save(const std::string& path) const;
  static Classifier Load(const std::string& path);

  // Header/params conversion, shared with composite model files.
  nlohmann::json HeaderJson() const;
  std::vector<std::vector<double>> ParamVectors() const;
  static Classifier FromHeader(const nlohmann::json& header,
                               const std::vector<std::vector<double>>& params);

 private:
  Network net_;
  std::vector<std::string> label_names_;
};

struct TrainConfig {
  int epochs = 10;
  int batch_size = 64;
  double learning_rate = 0.05;
  double lr_decay = 1.0;   // learning rate multiplier applied after each epoch
  double momentum = 0.9;
  uint64_t seed = 1;
};

struct EpochStats {
  int epoch = 0;              // 1-based
  double mean_log_lik = 0.0;  // training-set mean log p(label)
  double accuracy = 0.0;      // training-set accuracy under dropout
};

struct TrainOutcome {
  Classifier classifier;
  std::vector<EpochStats> history;
};

// Mini-batch SGD with momentum.  Deterministic for a fixed seed: weight
// init, shuffling, and dropout all draw from one generator in a fixed order.
// Throws std::runtime_error naming the epoch if the loss stops being finite.
TrainOutcome TrainClassifier(
    const NetworkSpec& spec, const PatchDataset& data, const TrainConfig& config,
    const std::function<void(const EpochStats&)>& on_epoch = nullptr);

// Fraction of samples whose argmax posterior matches the label.
double EvaluateAccuracy(const Classifier& classifier, const PatchDataset& data);

}  // namespace textrec

#endif  // TEXTREC_NET_CLASSIFIER_H_
