// src/ngram.cc

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

#include "textrec/lm/ngram.h"

#include <cmath>
#include <stdexcept>

namespace textrec {

NGramModel::NGramModel(const Lexicon& lexicon, int order, double alpha,
                       double lambda) {
  if (order < 1) throw std::invalid_argument("ngram: order must be >= 1");
  if (lexicon.size() == 0) throw std::invalid_argument("ngram: empty lexicon");
  if (alpha <= 0.0) throw std::invalid_argument("ngram: alpha must be positive");
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("ngram: lambda must be in [0, 1]");
  order_ = order;
  alpha_ = alpha;
  lambda_ = lambda;
  collapsed_ = !lexicon.case_sensitive();
  alphabet_ = &lexicon.alphabet();
  orders_.resize(order);
  for (const std::string& w : lexicon.words()) CountWord(w);
}

void NGramModel::CountWord(const std::string& word) {
  for (int k = 1; k <= order_; ++k) {
    const std::string padded = std::string(k - 1, kBowMarker) + word;
    OrderCounts& oc = orders_[k - 1];
    for (size_t i = 0; i + k <= padded.size(); ++i) {
      const std::string context = padded.substr(i, k - 1);
      const char c = padded[i + k - 1];
      oc.grams[context][c] += 1.0;
      oc.context_total[context] += 1.0;
    }
  }
}

double NGramModel::ProbAtOrder(char c, const std::string& padded, int k) const {
  const int v = alphabet_->size();
  const OrderCounts& oc = orders_[k - 1];
  const std::string context = padded.substr(padded.size() - (k - 1));
  const auto total_it = oc.context_total.find(context);
  if (k == 1) {
    const double total = total_it == oc.context_total.end() ? 0.0 : total_it->second;
    double count = 0.0;
    if (const auto g = oc.grams.find(context); g != oc.grams.end())
      if (const auto ci = g->second.find(c); ci != g->second.end()) count = ci->second;
    return (count + alpha_) / (total + alpha_ * v);
  }
  const double lower = ProbAtOrder(c, padded, k - 1);
  if (total_it == oc.context_total.end()) return lower;  // unseen context
  double count = 0.0;
  if (const auto g = oc.grams.find(context); g != oc.grams.end())
    if (const auto ci = g->second.find(c); ci != g->second.end()) count = ci->second;
  const double here = (count + alpha_) / (total_it->second + alpha_ * v);
  return lambda_ * here + (1.0 - lambda_) * lower;
}

double NGramModel::Prob(char c, const std::string& prefix) const {
  const std::string query = collapsed_ ? CollapseString(std::string(1, c)) : std::string(1, c);
  if (!alphabet_->Contains(query[0]))
    throw std::invalid_argument(std::string("ngram: symbol '") + c +
                                "' outside the alphabet");
  const std::string history = collapsed_ ? CollapseString(prefix) : prefix;
  const std::string padded = std::string(order_ - 1, kBowMarker) + history;
  return ProbAtOrder(query[0], padded, order_);
}

double NGramModel::LogProb(char c, const std::string& prefix) const {
  return std::log(Prob(c, prefix));
}

nlohmann::json NGramModel::ToJson() const {
  nlohmann::json order_list = nlohmann::json::array();
  for (int k = 1; k <= order_; ++k) {
    nlohmann::json grams = nlohmann::json::object();
    for (const auto& [context, chars] : orders_[k - 1].grams) {
      nlohmann::json row = nlohmann::json::object();
      for (const auto& [c, count] : chars) row[std::string(1, c)] = count;
      grams[context] = row;
    }
    order_list.push_back(nlohmann::json{{"k", k}, {"grams", grams}});
  }
  return nlohmann::json{{"format", "ngram"},
                        {"order", order_},
                        {"alpha", alpha_},
                        {"lambda", lambda_},
                        {"collapsed", collapsed_},
                        {"orders", order_list}};
}

NGramModel NGramModel::FromJson(const nlohmann::json& j) {
  NGramModel m;
  m.order_ = j.at("order").get<int>();
  m.alpha_ = j.at("alpha").get<double>();
  m.lambda_ = j.at("lambda").get<double>();
  m.collapsed_ = j.at("collapsed").get<bool>();
  m.alphabet_ = m.collapsed_ ? &Alphabet::Collapsed() : &Alphabet::Full();
  m.orders_.resize(m.order_);
  for (const nlohmann::json& entry : j.at("orders")) {
    const int k = entry.at("k").get<int>();
    if (k < 1 || k > m.order_)
      throw std::runtime_error("ngram: bad stored order " + std::to_string(k));
    OrderCounts& oc = m.orders_[k - 1];
    for (const auto& [context, row] : entry.at("grams").items()) {
      for (const auto& [sym, count] : row.items()) {
        oc.grams[context][sym.at(0)] = count.get<double>();
        oc.context_total[context] += count.get<double>();
      }
    }
  }
  return m;
}

}  // namespace textrec
