// src/presets.cc

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

#include "textrec/net/presets.h"

#include <stdexcept>

namespace textrec {
namespace {

LayerSpec Conv(int maps, int filter, int pool, int pool_stride, int pieces,
               double include = 1.0) {
  LayerSpec l;
  l.kind = LayerKind::kConvMaxout;
  l.maps = maps;
  l.filter = filter;
  l.pool = pool;
  l.pool_stride = pool_stride;
  l.pieces = pieces;
  l.dropout_include = include;
  return l;
}

LayerSpec Dense(int units, int pieces, double include = 1.0) {
  LayerSpec l;
  l.kind = LayerKind::kDenseMaxout;
  l.units = units;
  l.pieces = pieces;
  l.dropout_include = include;
  return l;
}

}  // namespace

NetworkSpec CharNetDesk(int num_labels) {
  NetworkSpec s;
  s.input_side = kPatchSide;
  s.num_labels = num_labels;
  s.layers = {Conv(8, 8, 4, 2, 2), Dense(64, 5, 0.9)};
  return s;
}

NetworkSpec CharNetLarge(int num_labels) {
  // Filter counts follow the reference sizing; the spatial geometry is
  // adapted so valid convolutions chain on a 32x32 input.
  NetworkSpec s;
  s.input_side = kPatchSide;
  s.num_labels = num_labels;
  s.layers = {Conv(48, 8, 4, 2, 2),
              Conv(128, 5, 2, 2, 2),
              Conv(128, 3, 1, 1, 2),
              Dense(400, 5, 0.8)};
  s.softmax_dropout_include = 0.8;
  return s;
}

NetworkSpec FrameNetDesk(int num_states) {
  NetworkSpec s;
  s.input_side = kPatchSide;
  s.num_labels = num_states;
  s.layers = {Conv(8, 8, 4, 2, 2), Dense(48, 3, 0.9)};
  return s;
}

NetworkSpec CorrectionNetDesk() {
  NetworkSpec s;
  s.input_side = kPatchSide;
  s.num_labels = 3;
  s.layers = {Conv(6, 8, 4, 3, 2), Dense(32, 3, 0.9)};
  return s;
}

NetworkSpec DetectNetDesk() {
  NetworkSpec s;
  s.input_side = kPatchSide;
  s.num_labels = 2;
  s.layers = {Conv(6, 8, 4, 3, 2), Dense(32, 3, 0.9)};
  return s;
}

NetworkSpec PresetByName(const std::string& name, int num_labels) {
  if (name == "char-desk") return CharNetDesk(num_labels);
  if (name == "char-large") return CharNetLarge(num_labels);
  if (name == "frame-desk") return FrameNetDesk(num_labels);
  if (name == "correct-desk") return CorrectionNetDesk();
  if (name == "detect-desk") return DetectNetDesk();
  throw std::invalid_argument("unknown network preset: " + name);
}

}  // namespace textrec
