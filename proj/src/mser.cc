// src/mser.cc

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

#include "textrec/detect/mser.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace textrec {
namespace {

// Life of one node of the component tree.  When two components meet, the
// larger one keeps its identity and the smaller one dies; pixel indices are
// appended in join order, so the first size_history[t - born] entries are
// exactly the component's pixels at threshold t.
struct ComponentRec {
  int born = 0;
  bool alive = true;
  int size = 0;
  std::vector<int> size_history;  // one entry per level in [born, died]
  std::vector<int> pixels;        // flat indices, append-ordered
};

class Sweep {
 public:
  Sweep(const GrayImage& img, const MserParams& params)
      : img_(img), params_(params), w_(img.width), h_(img.height),
        parent_(static_cast<size_t>(w_) * h_, -1),
        rec_of_(static_cast<size_t>(w_) * h_, -1) {}

  std::vector<Region> Run(bool bright_on_dark) {
    BucketPixels();
    for (int t = 0; t < 256; ++t) {
      for (int p : buckets_[t]) Activate(p, t);
      for (int r : live_) recs_[r].size_history.push_back(recs_[r].size);
    }
    return CollectStable(bright_on_dark);
  }

 private:
  void BucketPixels() {
    buckets_.assign(256, {});
    for (int i = 0; i < w_ * h_; ++i) {
      const double v = img_.pixels[i];
      int level = static_cast<int>(std::lround(v * 255.0));
      level = std::clamp(level, 0, 255);
      buckets_[level].push_back(i);
    }
  }

  int Find(int p) {
    int root = p;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[p] != root) {
      const int next = parent_[p];
      parent_[p] = root;
      p = next;
    }
    return root;
  }

  void Activate(int p, int level) {
    parent_[p] = p;
    const int rec = static_cast<int>(recs_.size());
    recs_.push_back(ComponentRec{level, true, 1, {}, {p}});
    rec_of_[p] = rec;
    live_.push_back(rec);

    const int x = p % w_, y = p / w_;
    const int nbr[4] = {x > 0 ? p - 1 : -1, x + 1 < w_ ? p + 1 : -1,
                        y > 0 ? p - w_ : -1, y + 1 < h_ ? p + w_ : -1};
    for (int q : nbr) {
      if (q < 0 || parent_[q] < 0) continue;
      Union(p, q, level);
    }
  }

  void Union(int a, int b, int level) {
    int ra = Find(a), rb = Find(b);
    if (ra == rb) return;
    int rec_a = rec_of_[ra], rec_b = rec_of_[rb];
    if (recs_[rec_a].size < recs_[rec_b].size) {
      std::swap(ra, rb);
      std::swap(rec_a, rec_b);
    }
    parent_[rb] = ra;
    ComponentRec& big = recs_[rec_a];
    ComponentRec& small = recs_[rec_b];
    big.size += small.size;
    big.pixels.insert(big.pixels.end(), small.pixels.begin(), small.pixels.end());
    small.alive = false;
    live_.erase(std::find(live_.begin(), live_.end(), rec_b));
    rec_of_[ra] = rec_a;
  }

  std::vector<Region> CollectStable(bool bright_on_dark) {
    std::vector<Region> out;
    const int max_area =
        static_cast<int>(params_.max_area_frac * static_cast<double>(w_) * h_);
    for (const ComponentRec& rec : recs_) {
      const int levels = static_cast<int>(rec.size_history.size());
      const int lo = params_.delta, hi = levels - 1 - params_.delta;
      if (hi < lo) continue;
      std::vector<double> var(levels, 0.0);
      for (int i = lo; i <= hi; ++i)
        var[i] = static_cast<double>(rec.size_history[i + params_.delta] -
                                     rec.size_history[i - params_.delta]) /
                 static_cast<double>(rec.size_history[i]);
      for (int i = lo; i <= hi; ++i) {
        const bool down = i == lo || var[i] < var[i - 1];
        const bool up = i == hi || var[i] <= var[i + 1];
        if (!down || !up) continue;
        if (var[i] > params_.max_variation) continue;
        const int area = rec.size_history[i];
        if (area < params_.min_area || area > max_area) continue;
        out.push_back(MakeRegion(rec, rec.born + i, area, var[i], bright_on_dark));
      }
    }
    return out;
  }

  Region MakeRegion(const ComponentRec& rec, int level, int area, double var,
                    bool bright_on_dark) const {
    std::vector<int> px(rec.pixels.begin(), rec.pixels.begin() + area);
    std::sort(px.begin(), px.end());
    Region r;
    r.bright_on_dark = bright_on_dark;
    r.variation = var;
    r.level = level;
    r.area = area;
    int min_x = w_, max_x = -1, min_y = h_, max_y = -1;
    for (size_t i = 0; i < px.size();) {
      const int y = px[i] / w_, x = px[i] % w_;
      size_t j = i + 1;
      while (j < px.size() && px[j] == px[j - 1] + 1 && px[j] / w_ == y) ++j;
      r.runs.push_back(PixelRun{y, x, static_cast<int>(j - i)});
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, px[j - 1] % w_);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
      i = j;
    }
    r.box = Box{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
    return r;
  }

  const GrayImage& img_;
  const MserParams& params_;
  int w_, h_;
  std::vector<int> parent_;  // -1 while inactive
  std::vector<int> rec_of_;  // root pixel -> component record
  std::vector<std::vector<int>> buckets_;
  std::vector<ComponentRec> recs_;
  std::vector<int> live_;
};

}  // namespace

std::vector<Region> ExtractMsers(const GrayImage& img, const MserParams& params) {
  if (img.width <= 0 || img.height <= 0)
    throw std::invalid_argument("ExtractMsers: empty image");
  std::vector<Region> out = Sweep(img, params).Run(false);
  std::vector<Region> bright = Sweep(InvertImage(img), params).Run(true);
  out.insert(out.end(), std::make_move_iterator(bright.begin()),
             std::make_move_iterator(bright.end()));
  return out;
}

}  // namespace textrec
