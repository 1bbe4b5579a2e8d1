// textrec/net/presets.h

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

// Network architecture presets.  The "desk" variants are sized so the whole
// pipeline trains on a laptop-class CPU in minutes; "large" keeps the
// original filter counts (48/128/128 maps, 400-unit maxout) for users with
// time to spend.  Every preset takes 32x32 single-channel patches.

#ifndef TEXTREC_NET_PRESETS_H_
#define TEXTREC_NET_PRESETS_H_

#include <string>

#include "textrec/net/network.h"

namespace textrec {

inline constexpr int kPatchSide = 32;

// Character classifier over an alphabet of `num_labels` symbols.
NetworkSpec CharNetDesk(int num_labels);
NetworkSpec CharNetLarge(int num_labels);

// Frame-state classifier feeding the HMM (one label per HMM state).
NetworkSpec FrameNetDesk(int num_states);

// Segmentation-correction net: labels {correct, over-segmented, under-segmented}.
NetworkSpec CorrectionNetDesk();

// Text-vs-background gate used during detection.
NetworkSpec DetectNetDesk();

// Lookup by name ("char-desk", "char-large", "frame-desk", "correct-desk",
// "detect-desk"); throws std::invalid_argument for unknown names.
NetworkSpec PresetByName(const std::string& name, int num_labels);

}  // namespace textrec

#endif  // TEXTREC_NET_PRESETS_H_
