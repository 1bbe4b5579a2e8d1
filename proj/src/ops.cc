// src/ops.cc

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

#include "textrec/net/ops.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace textrec {

std::vector<double> Softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw std::invalid_argument("Softmax: empty logits");
  const double shift = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - shift);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

std::pair<std::vector<double>, double> SoftmaxXent(const std::vector<double>& logits,
                                                   int label) {
  if (label < 0 || static_cast<size_t>(label) >= logits.size())
    throw std::out_of_range("SoftmaxXent: label out of range");
  const double shift = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  std::vector<double> post(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    post[i] = std::exp(logits[i] - shift);
    total += post[i];
  }
  for (double& v : post) v /= total;
  // log p(label) computed from shifted logits, not from the (possibly
  // underflowed) normalized posterior.
  const double loss = -(logits[label] - shift - std::log(total));
  return {std::move(post), loss};
}

std::vector<double> DropoutMask(size_t n, double include_prob, Rng* rng) {
  if (include_prob <= 0.0 || include_prob > 1.0)
    throw std::invalid_argument("DropoutMask: include_prob must be in (0, 1]");
  std::vector<double> mask(n, 1.0);
  if (include_prob == 1.0) return mask;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double scale = 1.0 / include_prob;
  for (size_t i = 0; i < n; ++i)
    mask[i] = unif(*rng) < include_prob ? scale : 0.0;
  return mask;
}

std::vector<double> DropoutApply(const std::vector<double>& activations,
                                 double include_prob, DropoutMode mode, Rng* rng) {
  if (mode == DropoutMode::kEval) return activations;
  if (rng == nullptr) throw std::invalid_argument("DropoutApply: train mode needs rng");
  std::vector<double> mask = DropoutMask(activations.size(), include_prob, rng);
  std::vector<double> out(activations.size());
  for (size_t i = 0; i < activations.size(); ++i) out[i] = activations[i] * mask[i];
  return out;
}

void SgdMomentumStep(std::vector<double>* params, const std::vector<double>& grads,
                     std::vector<double>* velocity, double lr, double momentum) {
  if (params->size() != grads.size() || params->size() != velocity->size())
    throw std::invalid_argument("SgdMomentumStep: size mismatch");
  for (size_t i = 0; i < params->size(); ++i) {
    (*velocity)[i] = momentum * (*velocity)[i] - lr * grads[i];
    (*params)[i] += (*velocity)[i];
  }
}

}  // namespace textrec
