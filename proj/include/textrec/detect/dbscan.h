// textrec/detect/dbscan.h

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

#ifndef TEXTREC_DETECT_DBSCAN_H_
#define TEXTREC_DETECT_DBSCAN_H_

#include <functional>
#include <vector>

namespace textrec {

inline constexpr int kDbscanNoise = -1;

// Density clustering under an arbitrary distance.  A point is core when its
// eps-neighborhood (self included) holds at least min_pts points.  Points
// are seeded in input order and border points stay with the first cluster
// that claims them, so the labeling is deterministic.
std::vector<int> DbscanDistance(
    int n, const std::function<double(int, int)>& distance, double eps,
    int min_pts);

// Euclidean convenience wrapper over feature vectors (all the same length).
std::vector<int> Dbscan(const std::vector<std::vector<double>>& points,
                        double eps, int min_pts);

}  // namespace textrec

#endif  // TEXTREC_DETECT_DBSCAN_H_
