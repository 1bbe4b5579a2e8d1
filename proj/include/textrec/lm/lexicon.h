// textrec/lm/lexicon.h

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

#ifndef TEXTREC_LM_LEXICON_H_
#define TEXTREC_LM_LEXICON_H_

#include <string>
#include <unordered_set>
#include <vector>

#include "textrec/common.h"

namespace textrec {

// A word list over the recognition alphabet.  Case-insensitive lexicons
// collapse words on construction and match against collapsed queries.
class Lexicon {
 public:
  Lexicon(const std::vector<std::string>& words, bool case_sensitive);

  // One word per line; blank lines and lines starting with '#' are skipped.
  static Lexicon FromFile(const std::string& path, bool case_sensitive);

  bool case_sensitive() const { return case_sensitive_; }
  const Alphabet& alphabet() const;
  size_t size() const { return words_.size(); }
  // Sorted, deduplicated, collapsed when case-insensitive.
  const std::vector<std::string>& words() const { return words_; }

  bool Contains(const std::string& word) const;

 private:
  bool case_sensitive_;
  std::vector<std::string> words_;
  std::unordered_set<std::string> set_;
};

// Levenshtein distance with unit insert/delete/substitute costs.
int EditDistance(const std::string& a, const std::string& b);

enum class SelectMode { kInList, kEditDistance };

struct LexiconChoice {
  std::string word;
  SelectMode mode = SelectMode::kInList;
  int edit_dist = 0;  // 0 in kInList mode
};

// First ranked word present in the lexicon; otherwise the lexicon word
// nearest to the top-ranked hypothesis by edit distance (ties: lexicographic
// smallest).  Queries are collapsed first when the lexicon is
// case-insensitive.  Throws on empty inputs.
LexiconChoice LexiconSelect(const std::vector<std::string>& ranked,
                            const Lexicon& lexicon);

// 62-class posterior -> 36-class: letters get upper + lower mass, digits
// pass through.  Mass is conserved exactly.
std::vector<double> CollapseCase(const std::vector<double>& posteriors);

}  // namespace textrec

#endif  // TEXTREC_LM_LEXICON_H_
