// textrec/imaging/frames.cc

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

#include "textrec/imaging/frames.h"

#include <cmath>
#include <stdexcept>

namespace textrec {

FrameSequence ExtractFrames(const GrayImage& img, int frame_width, int stride,
                            int patch_side, double epsilon) {
  if (frame_width < 1 || stride < 1)
    throw std::invalid_argument("ExtractFrames: frame_width and stride must be positive");
  if (img.width < frame_width)
    throw std::invalid_argument("ExtractFrames: image narrower than frame_width (" +
                                std::to_string(img.width) + " < " +
                                std::to_string(frame_width) + ")");
  FrameSequence seq;
  seq.frame_width = frame_width;
  seq.stride = stride;
  seq.source_width = img.width;
  const int count = (img.width - frame_width) / stride + 1;
  seq.frames.reserve(count);
  for (int t = 0; t < count; ++t) {
    Patch raw = ResampleToPatch(img, t * stride, 0, frame_width, img.height, patch_side);
    seq.frames.push_back(NormalizePatch(raw, epsilon));
  }
  return seq;
}

FrameSequence ExtractFramesDefault(const GrayImage& img, int patch_side) {
  return ExtractFrames(img, DefaultFrameWidth(img.height),
                       DefaultFrameStride(img.height), patch_side);
}

std::vector<RegionInterval> BuildStretchRegions(const std::vector<ColumnSpan>& unit_spans,
                                                int width, double stretch) {
  if (unit_spans.empty()) throw std::invalid_argument("BuildStretchRegions: no spans");
  if (stretch < 0.0 || stretch >= 0.5)
    throw std::invalid_argument("BuildStretchRegions: stretch must be in [0, 0.5)");
  const int n = static_cast<int>(unit_spans.size());
  for (int i = 0; i < n; ++i) {
    const ColumnSpan& s = unit_spans[i];
    if (s.start >= s.end || s.start < 0 || s.end > width)
      throw std::invalid_argument("BuildStretchRegions: span out of range");
    if (i > 0 && unit_spans[i - 1].end > s.start)
      throw std::invalid_argument("BuildStretchRegions: spans overlap or are unsorted");
  }

  std::vector<RegionInterval> regions;
  int cursor = 0;
  for (int i = 0; i < n; ++i) {
    int unit_end;
    if (i + 1 < n) {
      // Separator runs from `stretch` inside this unit to `stretch` inside
      // the next one, swallowing any kerning gap in between.
      int left = unit_spans[i].end -
                 static_cast<int>(std::lround(stretch * unit_spans[i].Width()));
      unit_end = left;
    } else {
      unit_end = width;
    }
    regions.push_back({0, {cursor, unit_end}});
    if (i + 1 < n) {
      int right = unit_spans[i + 1].start +
                  static_cast<int>(std::lround(stretch * unit_spans[i + 1].Width()));
      regions.push_back({1, {unit_end, right}});
      cursor = right;
    }
  }
  return regions;
}

std::vector<int> FrameLabels(const std::vector<ColumnSpan>& unit_spans,
                             const FrameSequence& frames, const HmmTopology& topology,
                             double stretch) {
  auto regions = BuildStretchRegions(unit_spans, frames.source_width, stretch);
  const int num_regions = static_cast<int>(regions.size());
  const int num_frames = frames.Count();
  const int S = topology.states_per_region;
  // Every traversed region must visit all of its states once, so the walk
  // needs at least S frames per region.
  if (num_frames < S * num_regions)
    throw std::invalid_argument(
        "FrameLabels: frame sequence shorter than the minimum state path (" +
        std::to_string(num_frames) + " < " + std::to_string(S * num_regions) + ")");

  // bounds[k] is the first frame of region k; frames of region k are
  // [bounds[k], bounds[k+1]). Start from the frame whose start column first
  // reaches the region's column boundary, then clamp in both directions so
  // every region keeps at least S frames. Feasible because
  // num_frames >= S * num_regions.
  std::vector<int> bounds(num_regions + 1, 0);
  bounds[num_regions] = num_frames;
  for (int k = 1; k < num_regions; ++k) {
    int boundary_col = regions[k].span.start;
    int t = 0;
    while (t < num_frames && frames.StartColumn(t) < boundary_col) ++t;
    bounds[k] = t;
  }
  for (int k = 1; k < num_regions; ++k)
    bounds[k] = std::max(bounds[k], bounds[k - 1] + S);
  for (int k = num_regions - 1; k >= 1; --k)
    bounds[k] = std::min(bounds[k], bounds[k + 1] - S);

  std::vector<int> labels(num_frames);
  for (int r = 0; r < num_regions; ++r) {
    const int run_len = bounds[r + 1] - bounds[r];
    const int first_state = topology.FirstStateOf(regions[r].region_class);
    for (int p = 0; p < run_len; ++p)
      labels[bounds[r] + p] = first_state + (p * S) / run_len;
  }
  return labels;
}

}  // namespace textrec
