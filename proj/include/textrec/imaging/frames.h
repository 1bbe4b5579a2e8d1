// textrec/imaging/frames.h

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

#ifndef TEXTREC_IMAGING_FRAMES_H_
#define TEXTREC_IMAGING_FRAMES_H_

#include <vector>

#include "textrec/hmm/topology.h"
#include "textrec/imaging/image.h"
#include "textrec/imaging/synth.h"

namespace textrec {

// Sliding-window observation sequence. Frame t covers source columns
// [t*stride, t*stride + frame_width); the stored patches are already
// resampled to the classifier side and mean/variance normalized.
struct FrameSequence {
  std::vector<Patch> frames;
  int frame_width = 0;
  int stride = 1;
  int source_width = 0;

  int Count() const { return static_cast<int>(frames.size()); }
  int StartColumn(int t) const { return t * stride; }
};

// Square column windows resampled to patch_side and normalized. Throws if
// the image is narrower than frame_width. Frame count is
// floor((width - frame_width) / stride) + 1.
FrameSequence ExtractFrames(const GrayImage& img, int frame_width, int stride,
                            int patch_side = 32, double epsilon = 1e-8);

// Defaults derived from the image. The window is half the image height so
// that even a short word yields enough frames to walk every mandatory state:
// each traversed region needs states_per_region frames. The stride keeps the
// hop small enough that separator regions a few pixels wide still receive
// their own frames.
inline int DefaultFrameWidth(int height) { return std::max(4, height / 2); }
inline int DefaultFrameStride(int height) { return std::max(1, height / 16); }

FrameSequence ExtractFramesDefault(const GrayImage& img, int patch_side = 32);

// One region interval of ground truth: class 0 covers a unit (character or
// word), class 1 the separator between two units.
struct RegionInterval {
  int region_class = 0;
  ColumnSpan span;
};

// Expands unit spans into an alternating region tiling of [0, width). The
// separator between adjacent units stretches `stretch` of each unit's width
// into that unit; leading/trailing margins join the first/last unit region.
std::vector<RegionInterval> BuildStretchRegions(const std::vector<ColumnSpan>& unit_spans,
                                                int width, double stretch = 0.10);

// Ground-truth per-frame state labels. Region boundaries are mapped to frame
// indices via frame start columns, then nudged so every region keeps at least
// states_per_region frames; each region's frames are split evenly over that
// class's states in order. The result is always a path the topology permits.
// Throws if the frame sequence is shorter than the minimum state path.
std::vector<int> FrameLabels(const std::vector<ColumnSpan>& unit_spans,
                             const FrameSequence& frames, const HmmTopology& topology,
                             double stretch = 0.10);

inline std::vector<int> FrameLabels(const WordSample& ws, const FrameSequence& frames,
                                    const HmmTopology& topology, double stretch = 0.10) {
  return FrameLabels(ws.char_spans, frames, topology, stretch);
}

}  // namespace textrec

#endif  // TEXTREC_IMAGING_FRAMES_H_
