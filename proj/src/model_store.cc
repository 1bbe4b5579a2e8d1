// src/model_store.cc

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

#include "textrec/io/model_store.h"

#include <stdexcept>
#include <utility>

namespace textrec {

void SaveHybridModel(const std::string& path, const HybridModel& model) {
  const nlohmann::json net_header = model.frame_net.HeaderJson();
  ModelFile file;
  file.header = nlohmann::json{{"format", "hybrid-hmm"},
                               {"format_version", 1},
                               {"net", net_header},
                               {"blocks", net_header.at("blocks")}};
  file.params = model.frame_net.ParamVectors();
  file.extras.push_back(model.hmm.ToJson());
  WriteModelFile(path, file);
}

HybridModel LoadHybridModel(const std::string& path) {
  const ModelFile file = ReadModelFile(path);
  if (file.header.value("format", "") != "hybrid-hmm")
    throw std::runtime_error(path + ": not a hybrid segmenter model");
  if (file.extras.empty())
    throw std::runtime_error(path + ": missing the appended HMM segment");
  return HybridModel{Classifier::FromHeader(file.header.at("net"), file.params),
                     HmmModel::FromJson(file.extras.front())};
}

}  // namespace textrec
