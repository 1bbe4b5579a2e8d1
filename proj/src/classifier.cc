// src/classifier.cc

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

#include "textrec/net/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace textrec {

std::vector<double> Classifier::PredictPosteriors(const Patch& patch) const {
  if (patch.side != spec().input_side)
    throw std::invalid_argument("classifier expects " +
                                std::to_string(spec().input_side) +
                                "x" + std::to_string(spec().input_side) +
                                " patches, got side " + std::to_string(patch.side));
  return net_.Posteriors(patch.values);
}

int Classifier::PredictLabel(const Patch& patch) const {
  const std::vector<double> post = PredictPosteriors(patch);
  return static_cast<int>(std::max_element(post.begin(), post.end()) - post.begin());
}

nlohmann::json Classifier::HeaderJson() const {
  nlohmann::json blocks = nlohmann::json::array();
  size_t li = 0;
  for (size_t i = 0; i < net_.NumLayers(); ++i) {
    for (const ParamBlock* b : net_.layer(i).Blocks()) {
      blocks.push_back(nlohmann::json{
          {"name", "layer" + std::to_string(i) + "." + b->name},
          {"shape", b->shape}});
      ++li;
    }
  }
  nlohmann::json header{{"format", "classifier"},
                        {"format_version", 1},
                        {"spec", spec().ToJson()},
                        {"blocks", blocks}};
  if (!label_names_.empty()) header["labels"] = label_names_;
  return header;
}

std::vector<std::vector<double>> Classifier::ParamVectors() const {
  std::vector<std::vector<double>> out;
  for (const ParamBlock* b : net_.Blocks()) out.push_back(b->value);
  return out;
}

Classifier Classifier::FromHeader(const nlohmann::json& header,
                                  const std::vector<std::vector<double>>& params) {
  Classifier c(NetworkSpec::FromJson(header.at("spec")));
  std::vector<ParamBlock*> blocks = c.net_.Blocks();
  if (blocks.size() != params.size())
    throw std::runtime_error("model declares " + std::to_string(params.size()) +
                             " blocks, architecture has " +
                             std::to_string(blocks.size()));
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i]->value.size() != params[i].size())
      throw std::runtime_error("block " + std::to_string(i) + " has " +
                               std::to_string(params[i].size()) + " values, want " +
                               std::to_string(blocks[i]->value.size()));
    blocks[i]->value = params[i];
  }
  if (header.contains("labels"))
    c.label_names_ = header.at("labels").get<std::vector<std::string>>();
  return c;
}

void Classifier::Save(const std::string& path) const {
  ModelFile file;
  file.header = HeaderJson();
  file.params = ParamVectors();
  WriteModelFile(path, file);
}

Classifier Classifier::Load(const std::string& path) {
  const ModelFile file = ReadModelFile(path);
  if (file.header.value("format", "") != "classifier")
    throw std::runtime_error(path + ": not a classifier model");
  return FromHeader(file.header, file.params);
}

TrainOutcome TrainClassifier(
    const NetworkSpec& spec, const PatchDataset& data, const TrainConfig& config,
    const std::function<void(const EpochStats&)>& on_epoch) {
  if (data.empty()) throw std::invalid_argument("TrainClassifier: empty dataset");
  if (config.epochs <= 0 || config.batch_size <= 0)
    throw std::invalid_argument("TrainClassifier: epochs and batch_size must be positive");
  for (const LabeledPatch& s : data)
    if (s.label < 0 || s.label >= spec.num_labels)
      throw std::invalid_argument("TrainClassifier: label " +
                                  std::to_string(s.label) + " outside [0, " +
                                  std::to_string(spec.num_labels) + ")");

  TrainOutcome out{Classifier(spec), {}};
  Network& net = out.classifier.network();
  Rng rng(config.seed);
  net.InitParams(&rng);

  std::vector<ParamBlock*> blocks = net.Blocks();
  std::vector<std::vector<double>> velocity;
  velocity.reserve(blocks.size());
  for (ParamBlock* b : blocks) velocity.emplace_back(b->Size(), 0.0);

  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  double lr = config.learning_rate;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total_loss = 0.0;
    size_t correct = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t stop = std::min(order.size(), start + config.batch_size);
      for (ParamBlock* b : blocks) b->ZeroGrad();
      for (size_t s = start; s < stop; ++s) {
        const LabeledPatch& sample = data[order[s]];
        int predicted = -1;
        const double loss =
            net.TrainStep(sample.patch.values, sample.label, &rng, &predicted);
        total_loss += loss;
        if (predicted == sample.label) ++correct;
      }
      const double inv_n = 1.0 / static_cast<double>(stop - start);
      for (size_t bi = 0; bi < blocks.size(); ++bi) {
        for (double& g : blocks[bi]->grad) g *= inv_n;
        SgdMomentumStep(&blocks[bi]->value, blocks[bi]->grad, &velocity[bi], lr,
                        config.momentum);
      }
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_log_lik = -total_loss / static_cast<double>(data.size());
    stats.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    if (!std::isfinite(stats.mean_log_lik))
      throw std::runtime_error("training diverged at epoch " +
                               std::to_string(epoch) +
                               ": mean log-likelihood is not finite");
    out.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
    lr *= config.lr_decay;
  }
  return out;
}

double EvaluateAccuracy(const Classifier& classifier, const PatchDataset& data) {
  if (data.empty()) return 0.0;
  size_t correct = 0;
  for (const LabeledPatch& s : data)
    if (classifier.PredictLabel(s.patch) == s.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace textrec
