// textrec/hmm/topology.h

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

#ifndef TEXTREC_HMM_TOPOLOGY_H_
#define TEXTREC_HMM_TOPOLOGY_H_

#include <string>
#include <vector>

namespace textrec {

// Left-to-right topology over alternating region classes. Class 0 is the
// unit being segmented (character or word), class 1 the separator region.
// Within a region a state may loop on itself or advance by one; the last
// state of a region feeds the first state of every other class. Sequences
// start in state 0 (first unit-region state).
struct HmmTopology {
  int num_classes = 2;
  int states_per_region = 4;
  std::vector<std::string> class_names = {"unit", "inter"};

  int NumStates() const { return num_classes * states_per_region; }
  int ClassOf(int state) const { return state / states_per_region; }
  int PosInRegion(int state) const { return state % states_per_region; }
  int FirstStateOf(int region_class) const { return region_class * states_per_region; }

  bool Permitted(int from, int to) const {
    if (from == to) return true;
    if (ClassOf(from) == ClassOf(to)) return to == from + 1;
    return PosInRegion(from) == states_per_region - 1 && PosInRegion(to) == 0;
  }

  static HmmTopology CharInter(int states_per_region = 4) {
    return HmmTopology{2, states_per_region, {"char", "inter"}};
  }
  static HmmTopology WordInter(int states_per_region = 4) {
    return HmmTopology{2, states_per_region, {"word", "interword"}};
  }
};

}  // namespace textrec

#endif  // TEXTREC_HMM_TOPOLOGY_H_
