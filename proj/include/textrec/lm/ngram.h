// textrec/lm/ngram.h

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

// Character n-gram model with begin-of-word padding.  Estimation is add-α
// per order with interpolated backoff: a seen context mixes the add-α
// estimate with the next-lower order (weight λ on the higher order); an
// unseen context backs off entirely, so its distribution equals the
// lower-order one.

#ifndef TEXTREC_LM_NGRAM_H_
#define TEXTREC_LM_NGRAM_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "textrec/lm/lexicon.h"

namespace textrec {

// Begin-of-word padding marker; deliberately outside the alphabet.
inline constexpr char kBowMarker = '^';

class NGramModel {
 public:
  // Counts every k-gram (k = 1..order) of each lexicon word padded with k-1
  // markers.  Throws on order < 1 or an empty lexicon.
  NGramModel(const Lexicon& lexicon, int order, double alpha = 0.01,
             double lambda = 0.9);

  int order() const { return order_; }
  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  const Alphabet& alphabet() const { return *alphabet_; }

  // p(c | last order-1 characters of the padded prefix).  Strictly positive;
  // sums to 1 over the alphabet for any prefix.  Throws if c is outside the
  // alphabet.
  double Prob(char c, const std::string& prefix) const;
  double LogProb(char c, const std::string& prefix) const;

  // Count storage round trip (used by the model container).
  nlohmann::json ToJson() const;
  static NGramModel FromJson(const nlohmann::json& j);

 private:
  struct OrderCounts {
    std::unordered_map<std::string, std::unordered_map<char, double>> grams;
    std::unordered_map<std::string, double> context_total;
  };

  NGramModel() = default;
  void CountWord(const std::string& word);
  double ProbAtOrder(char c, const std::string& padded, int k) const;

  int order_ = 1;
  double alpha_ = 0.01;
  double lambda_ = 0.9;
  bool collapsed_ = false;
  const Alphabet* alphabet_ = nullptr;
  std::vector<OrderCounts> orders_;  // index k-1 holds the order-k counts
};

}  // namespace textrec

#endif  // TEXTREC_LM_NGRAM_H_
