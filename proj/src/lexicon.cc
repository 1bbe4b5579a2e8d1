// src/lexicon.cc

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

#include "textrec/lm/lexicon.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace textrec {

Lexicon::Lexicon(const std::vector<std::string>& words, bool case_sensitive)
    : case_sensitive_(case_sensitive) {
  const Alphabet& alpha = alphabet();
  for (const std::string& raw : words) {
    if (raw.empty()) throw std::invalid_argument("lexicon: empty word");
    const std::string w = case_sensitive ? raw : CollapseString(raw);
    for (char c : w)
      if (!alpha.Contains(c))
        throw std::invalid_argument("lexicon word '" + raw +
                                    "' has a character outside the alphabet");
    if (set_.insert(w).second) words_.push_back(w);
  }
  std::sort(words_.begin(), words_.end());
}

Lexicon Lexicon::FromFile(const std::string& path, bool case_sensitive) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.push_back(line);
  }
  return Lexicon(words, case_sensitive);
}

const Alphabet& Lexicon::alphabet() const {
  return case_sensitive_ ? Alphabet::Full() : Alphabet::Collapsed();
}

bool Lexicon::Contains(const std::string& word) const {
  return set_.count(case_sensitive_ ? word : CollapseString(word)) > 0;
}

int EditDistance(const std::string& a, const std::string& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    prev.swap(cur);
  }
  return prev[m];
}

LexiconChoice LexiconSelect(const std::vector<std::string>& ranked,
                            const Lexicon& lexicon) {
  if (ranked.empty()) throw std::invalid_argument("LexiconSelect: empty ranking");
  if (lexicon.size() == 0) throw std::invalid_argument("LexiconSelect: empty lexicon");
  const bool cs = lexicon.case_sensitive();
  for (const std::string& w : ranked) {
    const std::string q = cs ? w : CollapseString(w);
    if (lexicon.Contains(q)) return {q, SelectMode::kInList, 0};
  }
  const std::string top = cs ? ranked.front() : CollapseString(ranked.front());
  std::string best;
  int best_dist = -1;
  for (const std::string& w : lexicon.words()) {
    const int d = EditDistance(top, w);
    if (best_dist < 0 || d < best_dist) {  // words() sorted, so ties keep the
      best_dist = d;                       // lexicographically smallest
      best = w;
    }
  }
  return {best, SelectMode::kEditDistance, best_dist};
}

std::vector<double> CollapseCase(const std::vector<double>& posteriors) {
  if (posteriors.size() != 62)
    throw std::invalid_argument("CollapseCase: want 62 posteriors, got " +
                                std::to_string(posteriors.size()));
  std::vector<double> out(36);
  for (int d = 0; d < 10; ++d) out[d] = posteriors[d];
  for (int l = 0; l < 26; ++l) out[10 + l] = posteriors[10 + l] + posteriors[36 + l];
  return out;
}

}  // namespace textrec
