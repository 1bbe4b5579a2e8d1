// textrec/imaging/font.h

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

#ifndef TEXTREC_IMAGING_FONT_H_
#define TEXTREC_IMAGING_FONT_H_

#include <array>
#include <string>

namespace textrec {

// Built-in bitmap font over the 62-symbol alphabet. Glyphs live on a 9-row
// grid: rows 0..6 carry the cap height, rows 7..8 the descenders. Widths
// vary per glyph. '#' marks ink.
struct Glyph {
  static constexpr int kRows = 9;
  char symbol;
  int width;
  std::array<std::string, kRows> rows;  // each string is `width` chars of '#'/'.'
};

// Returns the glyph for a supported symbol; throws std::invalid_argument
// naming the character otherwise.
const Glyph& LookupGlyph(char c);

bool HasGlyph(char c);

}  // namespace textrec

#endif  // TEXTREC_IMAGING_FONT_H_
