// textrec/box.h

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

#ifndef TEXTREC_BOX_H_
#define TEXTREC_BOX_H_

#include <algorithm>

namespace textrec {

// Axis-aligned pixel rectangle, w/h >= 1 for valid boxes.
struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long long Area() const { return static_cast<long long>(w) * h; }
  int x2() const { return x + w; }
  int y2() const { return y + h; }

  bool operator==(const Box& o) const {
    return x == o.x && y == o.y && w == o.w && h == o.h;
  }
};

inline long long IntersectionArea(const Box& a, const Box& b) {
  long long iw = std::min(a.x2(), b.x2()) - std::max(a.x, b.x);
  long long ih = std::min(a.y2(), b.y2()) - std::max(a.y, b.y);
  return (iw > 0 && ih > 0) ? iw * ih : 0;
}

// Smallest box containing both.
inline Box BoundingUnion(const Box& a, const Box& b) {
  int x1 = std::min(a.x, b.x), y1 = std::min(a.y, b.y);
  int x2 = std::max(a.x2(), b.x2()), y2 = std::max(a.y2(), b.y2());
  return {x1, y1, x2 - x1, y2 - y1};
}

inline double Iou(const Box& a, const Box& b) {
  long long inter = IntersectionArea(a, b);
  long long uni = a.Area() + b.Area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

}  // namespace textrec

#endif  // TEXTREC_BOX_H_
