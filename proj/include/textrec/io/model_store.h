// textrec/io/model_store.h

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

// Composite model files: a frame classifier plus its HMM in one container.
// The classifier's parameter blocks fill the binary section; the HMM rides
// along as an appended JSON segment.

#ifndef TEXTREC_IO_MODEL_STORE_H_
#define TEXTREC_IO_MODEL_STORE_H_

#include <string>

#include "textrec/hmm/hmm.h"
#include "textrec/net/classifier.h"

namespace textrec {

struct HybridModel {
  Classifier frame_net;
  HmmModel hmm;
};

void SaveHybridModel(const std::string& path, const HybridModel& model);

// Throws std::runtime_error on format mismatch, ModelFormatError on a
// malformed container.
HybridModel LoadHybridModel(const std::string& path);

}  // namespace textrec

#endif  // TEXTREC_IO_MODEL_STORE_H_
