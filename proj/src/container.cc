// src/container.cc

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

#include "textrec/io/container.h"

#include <bit>
#include <cstring>
#include <fstream>

namespace textrec {
namespace {

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");
static_assert(sizeof(double) == 8, "container I/O assumes 64-bit doubles");

constexpr char kMagic[5] = {'M', 'X', 'T', 'N', '1'};

void AppendU64(std::vector<uint8_t>* out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out->push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void AppendJson(std::vector<uint8_t>* out, const nlohmann::json& j) {
  const std::string text = j.dump();
  AppendU64(out, text.size());
  out->insert(out->end(), text.begin(), text.end());
}

uint64_t BlockSize(const nlohmann::json& block) {
  uint64_t n = 1;
  for (const nlohmann::json& d : block.at("shape")) n *= d.get<uint64_t>();
  return n;
}

// Reads length-prefixed segments; all offsets are absolute file positions.
class Cursor {
 public:
  Cursor(const std::vector<uint8_t>& bytes, uint64_t start)
      : bytes_(bytes), pos_(start) {}

  uint64_t pos() const { return pos_; }
  bool AtEnd() const { return pos_ == bytes_.size(); }

  void Expect(uint64_t n, const std::string& what) const {
    if (pos_ + n > bytes_.size())
      throw ModelFormatError("truncated " + what, pos_);
  }

  uint64_t TakeU64(const std::string& what) {
    Expect(8, what);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  nlohmann::json TakeJson(const std::string& what) {
    const uint64_t n = TakeU64(what);
    Expect(n, what);
    const uint64_t at = pos_;
    const char* begin = reinterpret_cast<const char*>(bytes_.data() + pos_);
    pos_ += n;
    try {
      return nlohmann::json::parse(begin, begin + n);
    } catch (const nlohmann::json::parse_error& e) {
      throw ModelFormatError("bad JSON in " + what + ": " + e.what(), at);
    }
  }

  std::vector<double> TakeDoubles(uint64_t count, const std::string& what) {
    Expect(count * 8, what);
    std::vector<double> out(count);
    std::memcpy(out.data(), bytes_.data() + pos_, count * 8);
    pos_ += count * 8;
    return out;
  }

 private:
  const std::vector<uint8_t>& bytes_;
  uint64_t pos_;
};

}  // namespace

std::vector<uint8_t> SerializeModel(const ModelFile& model) {
  if (!model.header.contains("blocks"))
    throw std::invalid_argument("model header lacks \"blocks\"");
  const nlohmann::json& blocks = model.header.at("blocks");
  if (blocks.size() != model.params.size())
    throw std::invalid_argument("header declares " + std::to_string(blocks.size()) +
                                " blocks, got " + std::to_string(model.params.size()) +
                                " param vectors");
  std::vector<uint8_t> out(kMagic, kMagic + sizeof(kMagic));
  AppendJson(&out, model.header);
  for (size_t i = 0; i < model.params.size(); ++i) {
    if (BlockSize(blocks[i]) != model.params[i].size())
      throw std::invalid_argument("block " + std::to_string(i) + " shape says " +
                                  std::to_string(BlockSize(blocks[i])) +
                                  " values, vector has " +
                                  std::to_string(model.params[i].size()));
    const uint8_t* raw = reinterpret_cast<const uint8_t*>(model.params[i].data());
    out.insert(out.end(), raw, raw + model.params[i].size() * 8);
  }
  for (const nlohmann::json& extra : model.extras) AppendJson(&out, extra);
  return out;
}

ModelFile ParseModel(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw ModelFormatError("bad magic, want MXTN1", 0);
  Cursor cur(bytes, sizeof(kMagic));
  ModelFile model;
  model.header = cur.TakeJson("header");
  if (!model.header.contains("blocks"))
    throw ModelFormatError("header lacks \"blocks\"", sizeof(kMagic));
  for (const nlohmann::json& block : model.header.at("blocks")) {
    const std::string name = block.value("name", "?");
    model.params.push_back(cur.TakeDoubles(BlockSize(block), "block " + name));
  }
  while (!cur.AtEnd()) model.extras.push_back(cur.TakeJson("extra segment"));
  return model;
}

void WriteModelFile(const std::string& path, const ModelFile& model) {
  const std::vector<uint8_t> bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

ModelFile ReadModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return ParseModel(bytes);
}

}  // namespace textrec
