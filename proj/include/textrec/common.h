// textrec/common.h

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

#ifndef TEXTREC_COMMON_H_
#define TEXTREC_COMMON_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace textrec {

// All randomness in the library flows through explicitly seeded engines.
using Rng = std::mt19937_64;

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Smallest probability admitted before taking a log. Keeps scores finite
// where a model would otherwise emit an exact zero.
constexpr double kProbFloor = 1e-300;

inline double SafeLog(double p) { return std::log(p < kProbFloor ? kProbFloor : p); }

// The 62-symbol recognition alphabet: digits, upper case, lower case.
// The 36-symbol variant merges the two letter cases.
class Alphabet {
 public:
  static const Alphabet& Full();       // 62 symbols
  static const Alphabet& Collapsed();  // 36 symbols

  int size() const { return static_cast<int>(symbols_.size()); }
  char Symbol(int index) const { return symbols_.at(index); }
  // Returns -1 for characters outside the alphabet.
  int IndexOf(char c) const {
    return (static_cast<unsigned char>(c) < 128) ? index_[static_cast<unsigned char>(c)] : -1;
  }
  bool Contains(char c) const { return IndexOf(c) >= 0; }
  const std::string& symbols() const { return symbols_; }

  explicit Alphabet(std::string symbols);

 private:
  std::string symbols_;
  int index_[128];
};

// Lower-cases letters, passes digits through. Used by the case-insensitive
// lexicon mode.
std::string CollapseString(const std::string& s);

}  // namespace textrec

#endif  // TEXTREC_COMMON_H_
