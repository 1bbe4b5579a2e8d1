// textrec/net/ops.h

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

#ifndef TEXTREC_NET_OPS_H_
#define TEXTREC_NET_OPS_H_

#include <utility>
#include <vector>

#include "textrec/common.h"

namespace textrec {

// Max-shifted softmax; exact for extreme logits.
std::vector<double> Softmax(const std::vector<double>& logits);

// Returns (posteriors, cross-entropy loss for `label`).
std::pair<std::vector<double>, double> SoftmaxXent(const std::vector<double>& logits,
                                                   int label);

enum class DropoutMode { kTrain, kEval };

// Inverted dropout: in train mode each unit is kept with probability
// include_prob and scaled by 1/include_prob; eval mode is the identity.
std::vector<double> DropoutApply(const std::vector<double>& activations,
                                 double include_prob, DropoutMode mode, Rng* rng);

// Train-mode mask with entries 0 or 1/include_prob; multiply elementwise to
// apply, and again to route gradients.
std::vector<double> DropoutMask(size_t n, double include_prob, Rng* rng);

// v <- momentum * v - lr * g;  theta <- theta + v
void SgdMomentumStep(std::vector<double>* params, const std::vector<double>& grads,
                     std::vector<double>* velocity, double lr, double momentum);

}  // namespace textrec

#endif  // TEXTREC_NET_OPS_H_
