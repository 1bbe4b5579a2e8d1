// textrec/common.cc

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

#include "textrec/common.h"

#include <cctype>

namespace textrec {

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  for (int i = 0; i < 128; ++i) index_[i] = -1;
  for (int i = 0; i < static_cast<int>(symbols_.size()); ++i) {
    index_[static_cast<unsigned char>(symbols_[i])] = i;
  }
}

const Alphabet& Alphabet::Full() {
  static const Alphabet a(
      "0123456789"
      "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
      "abcdefghijklmnopqrstuvwxyz");
  return a;
}

const Alphabet& Alphabet::Collapsed() {
  static const Alphabet a(
      "0123456789"
      "abcdefghijklmnopqrstuvwxyz");
  return a;
}

std::string CollapseString(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace textrec
