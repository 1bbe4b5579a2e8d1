// src/dbscan.cc

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

#include "textrec/detect/dbscan.h"

#include <cmath>
#include <stdexcept>

namespace textrec {

std::vector<int> DbscanDistance(
    int n, const std::function<double(int, int)>& distance, double eps,
    int min_pts) {
  if (eps <= 0.0) throw std::invalid_argument("dbscan: eps must be positive");
  if (min_pts < 1) throw std::invalid_argument("dbscan: min_pts must be >= 1");

  std::vector<std::vector<int>> nbrs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (distance(i, j) <= eps) nbrs[i].push_back(j);
  }

  std::vector<int> label(n, kDbscanNoise);
  int next_cluster = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] != kDbscanNoise) continue;
    if (static_cast<int>(nbrs[i].size()) < min_pts) continue;  // not core
    const int cluster = next_cluster++;
    label[i] = cluster;
    std::vector<int> frontier = {i};
    while (!frontier.empty()) {
      const int p = frontier.back();
      frontier.pop_back();
      for (int q : nbrs[p]) {
        if (label[q] != kDbscanNoise) continue;
        label[q] = cluster;
        if (static_cast<int>(nbrs[q].size()) >= min_pts) frontier.push_back(q);
      }
    }
  }
  return label;
}

std::vector<int> Dbscan(const std::vector<std::vector<double>>& points,
                        double eps, int min_pts) {
  const int n = static_cast<int>(points.size());
  for (const std::vector<double>& p : points)
    if (p.size() != points.front().size())
      throw std::invalid_argument("dbscan: ragged feature vectors");
  return DbscanDistance(
      n,
      [&points](int i, int j) {
        double s = 0.0;
        for (size_t d = 0; d < points[i].size(); ++d) {
          const double diff = points[i][d] - points[j][d];
          s += diff * diff;
        }
        return std::sqrt(s);
      },
      eps, min_pts);
}

}  // namespace textrec
