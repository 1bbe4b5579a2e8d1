// textrec/io/container.h

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

// Binary model container.  Layout:
//
//   bytes 0..4   magic "MXTN1"
//   u64 LE       header length N
//   N bytes      UTF-8 JSON header; header["blocks"] declares name and shape
//                of every raw parameter block
//   per block    size(shape) raw little-endian float64 values, in declaration
//                order
//   repeated     u64 LE length + UTF-8 JSON, appended segments until EOF
//
// Readers fail with ModelFormatError naming the byte offset of the problem.

#ifndef TEXTREC_IO_CONTAINER_H_
#define TEXTREC_IO_CONTAINER_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace textrec {

class ModelFormatError : public std::runtime_error {
 public:
  ModelFormatError(const std::string& what, uint64_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  uint64_t offset() const { return offset_; }

 private:
  uint64_t offset_;
};

struct ModelFile {
  nlohmann::json header;                     // must carry "blocks": [{name, shape}]
  std::vector<std::vector<double>> params;   // one entry per declared block
  std::vector<nlohmann::json> extras;        // appended JSON segments
};

std::vector<uint8_t> SerializeModel(const ModelFile& model);
ModelFile ParseModel(const std::vector<uint8_t>& bytes);

void WriteModelFile(const std::string& path, const ModelFile& model);
ModelFile ReadModelFile(const std::string& path);

}  // namespace textrec

#endif  // TEXTREC_IO_CONTAINER_H_
