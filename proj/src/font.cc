// textrec/imaging/font.cc

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

#include "textrec/imaging/font.h"

#include <map>
#include <stdexcept>
#include <vector>

namespace textrec {

namespace {

// Hand-drawn glyphs. Caps and digits sit on rows 0..6; lower case bodies on
// rows 2..6 with ascenders in rows 0..1 and descenders in rows 7..8. Every
// pair of glyphs differs somewhere (checked by the unit tests), including
// the classic confusables 0/O, 1/l/I and the case pairs that real fonts
// separate only by size.
const std::vector<Glyph> kGlyphTable = {
    {'0', 5, {".###.",
              "#...#",
              "#..##",
              "#.#.#",
              "##..#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'1', 3, {".#.",
              "##.",
              ".#.",
              ".#.",
              ".#.",
              ".#.",
              "###",
              "...",
              "..."}},
    {'2', 5, {".###.",
              "#...#",
              "....#",
              "...#.",
              "..#..",
              ".#...",
              "#####",
              ".....",
              "....."}},
    {'3', 5, {".###.",
              "#...#",
              "....#",
              "..##.",
              "....#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'4', 5, {"...#.",
              "..##.",
              ".#.#.",
              "#..#.",
              "#####",
              "...#.",
              "...#.",
              ".....",
              "....."}},
    {'5', 5, {"#####",
              "#....",
              "####.",
              "....#",
              "....#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'6', 5, {".###.",
              "#....",
              "#....",
              "####.",
              "#...#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'7', 5, {"#####",
              "....#",
              "...#.",
              "..#..",
              "..#..",
              ".#...",
              ".#...",
              ".....",
              "....."}},
    {'8', 5, {".###.",
              "#...#",
              "#...#",
              ".###.",
              "#...#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'9', 5, {".###.",
              "#...#",
              "#...#",
              ".####",
              "....#",
              "....#",
              ".###.",
              ".....",
              "....."}},

    {'A', 5, {".###.",
              "#...#",
              "#...#",
              "#####",
              "#...#",
              "#...#",
              "#...#",
              ".....",
              "....."}},
    {'B', 5, {"####.",
              "#...#",
              "#...#",
              "####.",
              "#...#",
              "#...#",
              "####.",
              ".....",
              "....."}},
    {'C', 5, {".###.",
              "#...#",
              "#....",
              "#....",
              "#....",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'D', 5, {"####.",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              "####.",
              ".....",
              "....."}},
    {'E', 5, {"#####",
              "#....",
              "#....",
              "####.",
              "#....",
              "#....",
              "#####",
              ".....",
              "....."}},
    {'F', 5, {"#####",
              "#....",
              "#....",
              "####.",
              "#....",
              "#....",
              "#....",
              ".....",
              "....."}},
    {'G', 5, {".###.",
              "#...#",
              "#....",
              "#.###",
              "#...#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'H', 5, {"#...#",
              "#...#",
              "#...#",
              "#####",
              "#...#",
              "#...#",
              "#...#",
              ".....",
              "....."}},
    {'I', 3, {"###",
              ".#.",
              ".#.",
              ".#.",
              ".#.",
              ".#.",
              "###",
              "...",
              "..."}},
    {'J', 5, {"..###",
              "...#.",
              "...#.",
              "...#.",
              "...#.",
              "#..#.",
              ".##..",
              ".....",
              "....."}},
    {'K', 5, {"#...#",
              "#..#.",
              "#.#..",
              "##...",
              "#.#..",
              "#..#.",
              "#...#",
              ".....",
              "....."}},
    {'L', 5, {"#....",
              "#....",
              "#....",
              "#....",
              "#....",
              "#....",
              "#####",
              ".....",
              "....."}},
    {'M', 7, {"#.....#",
              "##...##",
              "#.#.#.#",
              "#..#..#",
              "#.....#",
              "#.....#",
              "#.....#",
              ".......",
              "......."}},
    {'N', 5, {"#...#",
              "##..#",
              "##..#",
              "#.#.#",
              "#..##",
              "#..##",
              "#...#",
              ".....",
              "....."}},
    {'O', 5, {".###.",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'P', 5, {"####.",
              "#...#",
              "#...#",
              "####.",
              "#....",
              "#....",
              "#....",
              ".....",
              "....."}},
    {'Q', 5, {".###.",
              "#...#",
              "#...#",
              "#...#",
              "#.#.#",
              "#..#.",
              ".##.#",
              ".....",
              "....."}},
    {'R', 5, {"####.",
              "#...#",
              "#...#",
              "####.",
              "#.#..",
              "#..#.",
              "#...#",
              ".....",
              "....."}},
    {'S', 5, {".####",
              "#....",
              "#....",
              ".###.",
              "....#",
              "....#",
              "####.",
              ".....",
              "....."}},
    {'T', 5, {"#####",
              "..#..",
              "..#..",
              "..#..",
              "..#..",
              "..#..",
              "..#..",
              ".....",
              "....."}},
    {'U', 5, {"#...#",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'V', 5, {"#...#",
              "#...#",
              "#...#",
              "#...#",
              ".#.#.",
              ".#.#.",
              "..#..",
              ".....",
              "....."}},
    {'W', 11, {"#.........#",
               "#.........#",
               "#....#....#",
               "#....#....#",
               "#...#.#...#",
               "#..#...#..#",
               ".##.....##.",
               "...........",
               "..........."}},
    {'X', 5, {"#...#",
              "#...#",
              ".#.#.",
              "..#..",
              ".#.#.",
              "#...#",
              "#...#",
              ".....",
              "....."}},
    {'Y', 5, {"#...#",
              "#...#",
              ".#.#.",
              "..#..",
              "..#..",
              "..#..",
              "..#..",
              ".....",
              "....."}},
    {'Z', 5, {"#####",
              "....#",
              "...#.",
              "..#..",
              ".#...",
              "#....",
              "#####",
              ".....",
              "....."}},

    {'a', 5, {".....",
              ".....",
              ".###.",
              "....#",
              ".####",
              "#...#",
              ".####",
              ".....",
              "....."}},
    {'b', 5, {"#....",
              "#....",
              "####.",
              "#...#",
              "#...#",
              "#...#",
              "####.",
              ".....",
              "....."}},
    {'c', 4, {"....",
              "....",
              ".###",
              "#...",
              "#...",
              "#...",
              ".###",
              "....",
              "...."}},
    {'d', 5, {"....#",
              "....#",
              ".####",
              "#...#",
              "#...#",
              "#...#",
              ".####",
              ".....",
              "....."}},
    {'e', 5, {".....",
              ".....",
              ".###.",
              "#...#",
              "#####",
              "#....",
              ".###.",
              ".....",
              "....."}},
    {'f', 4, {"..##",
              ".#..",
              "####",
              ".#..",
              ".#..",
              ".#..",
              ".#..",
              "....",
              "...."}},
    {'g', 5, {".....",
              ".....",
              ".####",
              "#...#",
              "#...#",
              "#...#",
              ".####",
              "....#",
              ".###."}},
    {'h', 5, {"#....",
              "#....",
              "####.",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              ".....",
              "....."}},
    {'i', 3, {".#.",
              "...",
              "##.",
              ".#.",
              ".#.",
              ".#.",
              "###",
              "...",
              "..."}},
    {'j', 4, {"..#.",
              "....",
              ".##.",
              "..#.",
              "..#.",
              "..#.",
              "..#.",
              "..#.",
              "##.."}},
    {'k', 5, {"#....",
              "#....",
              "#..#.",
              "#.#..",
              "###..",
              "#..#.",
              "#...#",
              ".....",
              "....."}},
    {'l', 3, {"##.",
              ".#.",
              ".#.",
              ".#.",
              ".#.",
              ".#.",
              ".##",
              "...",
              "..."}},
    {'m', 5, {".....",
              ".....",
              "##.#.",
              "#.#.#",
              "#.#.#",
              "#.#.#",
              "#.#.#",
              ".....",
              "....."}},
    {'n', 5, {".....",
              ".....",
              "####.",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              ".....",
              "....."}},
    {'o', 5, {".....",
              ".....",
              ".###.",
              "#...#",
              "#...#",
              "#...#",
              ".###.",
              ".....",
              "....."}},
    {'p', 5, {".....",
              ".....",
              "####.",
              "#...#",
              "#...#",
              "#...#",
              "####.",
              "#....",
              "#...."}},
    {'q', 5, {".....",
              ".....",
              ".####",
              "#...#",
              "#...#",
              "#...#",
              ".####",
              "....#",
              "....#"}},
    {'r', 4, {"....",
              "....",
              "#.##",
              "##..",
              "#...",
              "#...",
              "#...",
              "....",
              "...."}},
    {'s', 4, {"....",
              "....",
              ".###",
              "#...",
              ".##.",
              "...#",
              "###.",
              "....",
              "...."}},
    {'t', 4, {".#..",
              ".#..",
              "####",
              ".#..",
              ".#..",
              ".#..",
              "..##",
              "....",
              "...."}},
    {'u', 5, {".....",
              ".....",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              ".####",
              ".....",
              "....."}},
    {'v', 5, {".....",
              ".....",
              "#...#",
              "#...#",
              "#...#",
              ".#.#.",
              "..#..",
              ".....",
              "....."}},
    {'w', 7, {".......",
              ".......",
              "#..#..#",
              "#..#..#",
              "#..#..#",
              "#.#.#.#",
              ".#...#.",
              ".......",
              "......."}},
    {'x', 5, {".....",
              ".....",
              "#...#",
              ".#.#.",
              "..#..",
              ".#.#.",
              "#...#",
              ".....",
              "....."}},
    {'y', 5, {".....",
              ".....",
              "#...#",
              "#...#",
              "#...#",
              "#...#",
              ".####",
              "....#",
              ".###."}},
    {'z', 4, {"....",
              "....",
              "####",
              "..#.",
              ".#..",
              "#...",
              "####",
              "....",
              "...."}},
};

const std::map<char, const Glyph*>& GlyphIndex() {
  static const std::map<char, const Glyph*> index = [] {
    std::map<char, const Glyph*> m;
    for (const Glyph& g : kGlyphTable) m[g.symbol] = &g;
    return m;
  }();
  return index;
}

}  // namespace

const Glyph& LookupGlyph(char c) {
  auto it = GlyphIndex().find(c);
  if (it == GlyphIndex().end())
    throw std::invalid_argument(std::string("unsupported character '") + c + "'");
  return *it->second;
}

bool HasGlyph(char c) { return GlyphIndex().count(c) > 0; }

}  // namespace textrec
